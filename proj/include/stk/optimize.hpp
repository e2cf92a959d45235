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

#include <functional>
#include <vector>

namespace stk {

struct NelderMeadOptions {
  int max_evals = 10000;
  double tol = 1e-4;         // relative spread of simplex values
  int restarts = 3;
  double shrink = 0.5;       // step scale applied on every restart
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // best value after each run
};

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt = {});

}  // namespace stk
