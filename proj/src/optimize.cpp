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
#include "stk/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stk {

namespace {

struct Run {
  std::vector<double> x;
  double f;
  bool converged;
};

Run simplex_run(const std::function<double(const std::vector<double>&)>& f,
                const std::vector<double>& x0, double f0, double step, double tol,
                int& evals, int max_evals, int& iterations) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1, f0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += step;
    val[i + 1] = f(pts[i + 1]);
    ++evals;
  }
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    double spread_x = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        spread_x = std::max(spread_x, std::abs(pts[i][k] - pts[best][k]));
    if (val[worst] - val[best] <= tol * std::abs(val[best]) + 1e-300 || spread_x < 1e-10)
      return {pts[best], val[best], true};
    if (evals >= max_evals) return {pts[best], val[best], false};
    ++iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / n;
    for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - pts[worst][k]);
    const double fr = eval(trial);
    if (fr < val[best]) {
      for (std::size_t k = 0; k < n; ++k)
        trial2[k] = centroid[k] + 2.0 * (centroid[k] - pts[worst][k]);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        val[worst] = fe;
      } else {
        pts[worst] = trial;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = trial;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    for (std::size_t k = 0; k < n; ++k)
      trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                          : centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
    const double fc = eval(trial2);
    if (fc < std::min(fr, val[worst])) {
      pts[worst] = trial2;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      val[i] = eval(pts[i]);
    }
  }
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt) {
  NelderMeadResult res;
  res.x = x0;
  res.f = f(x0);
  res.evals = 1;
  if (x0.empty()) {
    res.converged = true;
    return res;
  }
  double step = opt.initial_step;
  for (int run = 0; run <= opt.restarts; ++run) {
    const double before = res.f;
    Run r = simplex_run(f, res.x, res.f, step, opt.tol, res.evals, opt.max_evals,
                        res.iterations);
    if (r.f <= res.f) {
      res.x = r.x;
      res.f = r.f;
    }
    res.converged = r.converged;
    res.trace.push_back(res.f);
    if (!r.converged) break;
    if (run > 0 && before - res.f <= opt.tol * std::abs(before)) break;
    step *= opt.shrink;
  }
  return res;
}

}  // namespace stk
