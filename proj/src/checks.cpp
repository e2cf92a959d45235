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
#include "stk/checks.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>

#include "stk/errors.hpp"
#include "stk/gp.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/rng.hpp"
#include "stk/spectral.hpp"

namespace stk {

double gram_min_eigen_ratio(const KernelModel& m, int n_points, std::uint64_t seed,
                            double extent, int threads) {
  Philox4x64 rng(seed, 1);
  std::vector<SpaceTimePoint> pts(static_cast<std::size_t>(n_points));
  for (auto& p : pts) {
    p.s.resize(static_cast<std::size_t>(m.dim()));
    for (auto& x : p.s) x = extent * rng.uniform();
    p.t = extent * rng.uniform();
  }
  GramMatrix g = gram(m, pts, threads);
  if (m.nugget() > 0.0) g.values.diagonal().array() -= m.nugget();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / g.values.trace();
}

namespace {

nlohmann::json admissibility_check(const KernelModel& m) {
  nlohmann::json j{{"name", "admissibility"}};
  if (m.is_surrogate()) {
    j["skipped"] = "separable surrogate has no joint spectral density";
    j["pass"] = true;
    return j;
  }
  const double kmax = mode_cutoff(m);
  std::vector<double> omega = log_grid(1e-4, 1e4, 161);
  omega.insert(omega.begin(), 0.0);
  const AdmissibilityReport rep = admissibility_scan(m, log_grid(1e-4 * kmax, kmax, 161), omega);
  j.update(report_to_json(rep));
  j["pass"] = rep.pass;
  return j;
}

nlohmann::json oracle_check(const KernelModel& m, const CheckOptions& opt) {
  nlohmann::json j{{"name", "oracle"}};
  if (m.is_surrogate()) {
    j["skipped"] = "separable surrogate is not a Fourier-mode kernel";
    j["pass"] = true;
    return j;
  }
  Philox4x64 rng(opt.seed, 2);
  const double c00 = kernel_variance(m);
  double worst = 0.0;
  bool pass = true;
  nlohmann::json pts = nlohmann::json::array();
  for (int i = 0; i < opt.oracle_points; ++i) {
    const double r = 3.0 * rng.uniform();
    const double tau = 3.0 * rng.uniform();
    const double closed = m(r, tau);
    const OracleResult o = kernel_oracle(m, r, tau);
    const double tol = std::max(1e-6 * c00, 5.0 * o.error);
    const double diff = std::abs(closed - o.value);
    worst = std::max(worst, diff / c00);
    pass = pass && diff <= tol;
    pts.push_back({{"r", r}, {"tau", tau}, {"closed_form", closed},
                   {"oracle", o.value}, {"oracle_error", o.error}});
  }
  j["points"] = pts;
  j["max_abs_diff_over_c00"] = worst;
  j["pass"] = pass;
  return j;
}

nlohmann::json ode_check(const KernelModel& m) {
  nlohmann::json j{{"name", "ode_residual"}};
  const auto* p = std::get_if<LdhoParams>(&m.kernel());
  if (p == nullptr) {
    j["skipped"] = "generative ODE applies to LDHO kernels only";
    j["pass"] = true;
    return j;
  }
  const std::vector<double> hs{4e-2, 2e-2, 1e-2};
  const double w0 = p->omega0();
  const double rate = std::max(w0, 1.0 / p->tau_c());
  const double scale = std::abs(temporal_kernel(*p, 0.0)) * std::pow(rate, 4);
  bool pass = true;
  nlohmann::json rows = nlohmann::json::array();
  for (double tau : {0.5, 1.0, 2.0}) {
    std::vector<double> res;
    for (double h : hs) res.push_back(std::abs(ode_residual(*p, tau, h)));
    const double order = std::log2(res[1] / res[2]);
    const bool tiny = res.back() <= 1e-8 * scale;
    const bool ok = tiny || (order > 1.7 && order < 2.3);
    pass = pass && ok;
    rows.push_back({{"tau", tau}, {"h", hs}, {"residual", res}, {"order", order}, {"pass", ok}});
  }
  j["rows"] = rows;
  j["pass"] = pass;
  return j;
}

nlohmann::json gram_check(const KernelModel& m, const CheckOptions& opt) {
  const double ratio = gram_min_eigen_ratio(m, opt.gram_points, opt.seed, 5.0, opt.threads);
  return {{"name", "gram_psd"}, {"points", opt.gram_points},
          {"min_eigenvalue_over_trace", ratio}, {"pass", ratio >= -1e-8}};
}

}  // namespace

nlohmann::json run_checks(const KernelModel& m, const CheckOptions& opt) {
  nlohmann::json checks = nlohmann::json::array();
  checks.push_back(admissibility_check(m));
  checks.push_back(oracle_check(m, opt));
  checks.push_back(ode_check(m));
  checks.push_back(gram_check(m, opt));
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
  return {{"model", model_to_json(m)}, {"seed", opt.seed}, {"checks", checks}, {"pass", pass}};
}

}  // namespace stk
