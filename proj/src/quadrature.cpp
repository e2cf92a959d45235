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
#include "stk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace stk {

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f,
                                double a, double b) const {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(c + h * nodes[i]);
  return s * h;
}

const GaussLegendre& gauss_legendre_32() {
  static const GaussLegendre rule(32);
  return rule;
}

namespace {

struct Adaptive {
  const std::function<double(double)>& f;
  const GaussLegendre& rule;
  double tol_density;  // allowed error per unit length
  double rel_tol;
  int max_depth;
  IntegralEstimate out;

  void panel(double a, double b, double coarse, int depth) {
    const double m = 0.5 * (a + b);
    const double left = rule.integrate(f, a, m);
    const double right = rule.integrate(f, m, b);
    const double fine = left + right;
    const double err = std::abs(fine - coarse);
    const double mag = std::abs(left) + std::abs(right);
    const double allowed = std::max({tol_density * (b - a), rel_tol * mag,
                                     64.0 * std::numeric_limits<double>::epsilon() * mag});
    if (err <= allowed || depth >= max_depth) {
      if (err > allowed) out.converged = false;
      out.value += fine;
      out.error += err;
      ++out.panels;
      return;
    }
    panel(a, m, left, depth + 1);
    panel(m, b, right, depth + 1);
  }
};

}  // namespace

IntegralEstimate integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& breaks,
                                  double abs_tol, double rel_tol,
                                  int max_depth) {
  const GaussLegendre& rule = gauss_legendre_32();
  const std::size_t np = breaks.size() < 2 ? 0 : breaks.size() - 1;
  std::vector<double> coarse(np);
  double scale = 0.0;
  auto absf = [&f](double x) { return std::abs(f(x)); };
  for (std::size_t i = 0; i < np; ++i) {
    coarse[i] = rule.integrate(f, breaks[i], breaks[i + 1]);
    scale += rule.integrate(absf, breaks[i], breaks[i + 1]);
  }
  const double length = np ? breaks.back() - breaks.front() : 1.0;
  Adaptive ad{f, rule, std::max(abs_tol, rel_tol * scale) / length, rel_tol, max_depth, {}};
  for (std::size_t i = 0; i < np; ++i) ad.panel(breaks[i], breaks[i + 1], coarse[i], 0);
  return ad.out;
}

}  // namespace stk
