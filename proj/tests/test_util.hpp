/*
 * Copyright 2026 The stkernels Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "stk/params.hpp"

namespace stk_test {

inline constexpr double kPi = std::numbers::pi;

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

// One LDHO model per (dispersion, regime) plus both O-U dispersions.
inline std::vector<stk::KernelModel> all_variants(int dim) {
  using stk::Dispersion;
  using stk::LdhoParams;
  using stk::Regime;
  std::vector<stk::KernelModel> out;
  for (Dispersion disp : {Dispersion::Quadratic, Dispersion::Linear}) {
    out.emplace_back(LdhoParams::from_damped(1.3, 1.5, 2.0, Regime::Underdamped, 0.8, 0.3, disp, dim));
    out.emplace_back(LdhoParams::from_damped(1.3, 0.8, 0.25, Regime::Overdamped, 0.8, 0.3, disp, dim));
    out.emplace_back(LdhoParams(1.3, 0.8, 0.625, 0.8, 0.3, disp, dim));
    out.emplace_back(stk::OuParams(1.3, 0.8, 0.5, 0.4, 0.8, disp, dim));
  }
  return out;
}

}  // namespace stk_test
