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
#include "stk/presets.hpp"

#include <numbers>

#include "stk/errors.hpp"

namespace stk {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "ou1", "ou2", "lin1", "lin2", "s2"};
}

KernelModel preset_model(const std::string& name) {
  const auto q = Dispersion::Quadratic;
  const auto l = Dispersion::Linear;
  if (name == "fig1")
    return KernelModel(LdhoParams::from_damped(1.0, 3.0, 1.5 * kPi, Regime::Underdamped, 1.0, 0.4, q, 2));
  if (name == "fig2")
    return KernelModel(LdhoParams::from_damped(1.0, 0.8, 0.1 * kPi, Regime::Overdamped, 8.0, 0.4, q, 2));
  if (name == "fig3")
    return KernelModel(LdhoParams::from_damped(1.0, 3.0, 1.5 * kPi, Regime::Underdamped, 3.0, 0.4, q, 2));
  if (name == "ou1") return KernelModel(OuParams(1.0, 0.8, 0.5, 0.4, 8.0, q, 2));
  if (name == "ou2") return KernelModel(OuParams(1.0, 0.8, 0.5, 0.4, 8.0, l, 2));
  if (name == "lin1")
    return KernelModel(LdhoParams::from_damped(1.0, 3.0, 1.5 * kPi, Regime::Underdamped, 1.0, 0.4, l, 2));
  if (name == "lin2")
    return KernelModel(LdhoParams::from_damped(1.0, 0.8, 0.1 * kPi, Regime::Overdamped, 8.0, 0.4, l, 2));
  if (name == "s2")
    return KernelModel(LdhoParams::from_damped(1.0, 2.0, 1.5 * kPi, Regime::Underdamped, 3.0, 0.4, q, 2));
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : "|") + n;
  throw ConfigError("unknown figure preset '" + name + "' (expected " + known + ")");
}

}  // namespace stk
