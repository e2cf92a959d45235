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

#include <cstdint>

#include "json.hpp"
#include "stk/params.hpp"

namespace stk {

struct CheckOptions {
  std::uint64_t seed = 0;
  int oracle_points = 10;
  int gram_points = 100;
  int threads = 0;
};

// Admissibility scan, oracle agreement at random lags, ODE residual
// convergence and a Gram positive-semidefiniteness probe. The returned report
// has one entry per check and an overall "pass" flag.
nlohmann::json run_checks(const KernelModel& m, const CheckOptions& opt = {});

// Smallest eigenvalue of the Gram matrix divided by its trace.
double gram_min_eigen_ratio(const KernelModel& m, int n_points, std::uint64_t seed,
                            double extent = 5.0, int threads = 0);

}  // namespace stk
