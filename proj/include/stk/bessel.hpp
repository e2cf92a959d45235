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

namespace stk {

// Bessel function of the first kind J_nu(x), x >= 0, for
// nu in {-1/2, 0, 1/2, 1, 3/2} (radial transforms in d = 1..5).
double bessel_j(double nu, double x);

// x^(-nu) J_nu(x), continuous at x = 0 where it equals 1/(2^nu Gamma(nu+1)).
double bessel_j_scaled(double nu, double x);

// Approximate m-th positive zero (m >= 1) of J_nu from McMahon's expansion.
double bessel_zero_approx(double nu, int m);

}  // namespace stk
