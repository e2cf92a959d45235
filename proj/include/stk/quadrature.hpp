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

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  explicit GaussLegendre(int n);
  // Integral of f over [a, b].
  double integrate(const std::function<double(double)>& f, double a,
                   double b) const;

  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre_32();

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

// Adaptive bisection over the panels delimited by `breaks` (sorted). Each
// panel is accepted when the 32-point rule and its two-halves refinement
// differ by less than its share of max(abs_tol, rel_tol * scale), where
// scale is a first-pass estimate of the integral of |f|.
IntegralEstimate integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& breaks,
                                  double abs_tol, double rel_tol,
                                  int max_depth = 40);

}  // namespace stk
