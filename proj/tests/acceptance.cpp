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
// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. An optional first argument names the CLI executable used
// for the rerun-determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stk/checks.hpp"
#include "stk/fit.hpp"
#include "stk/gp.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/presets.hpp"
#include "stk/rng.hpp"
#include "stk/simulate.hpp"
#include "stk/spectral.hpp"

using namespace stk;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---- 1 ------------------------------------------------------------------

// Quadratic underdamped kernel at r = 0 with the phase sign as typeset in
// the source text (theta = omega_d tau + d phi / 2), normalized by C(0,0).
double printed_sign_norm(const LdhoParams& p, double tau) {
  const double t = std::abs(tau);
  const double tc = p.tau_c(), wd = p.omega_d(), b = p.interaction(), eps = p.epsilon();
  const int d = p.dim();
  const double q = t / (2 * tc);
  const double ar = eps + b * q, ai = b * wd * t;
  const double phi = std::atan2(-2 * b * wd * t * tc, b * t + 2 * eps * tc);
  const double theta = wd * t + 0.5 * d * phi;
  const double mag = std::pow(eps * eps / (ar * ar + ai * ai), 0.25 * d);
  return std::exp(-q) * mag * (std::cos(theta) + std::sin(theta) / (2 * wd * tc));
}

Outcome hole_effect() {
  const KernelModel m = preset_model("fig3");
  const double c00 = kernel_variance(m);
  auto cn = [&](double r, double tau) { return m(std::max(r, 0.0), tau) / c00; };
  double best = 1e300, br = 0, bt = 0;
  const int n = 301;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = 3.0 * i / (n - 1), tau = 3.0 * j / (n - 1);
      if (cn(r, tau) < best) {
        best = cn(r, tau);
        br = r;
        bt = tau;
      }
    }
  // Local refinement by coordinate golden-section sweeps.
  for (int sweep = 0; sweep < 6; ++sweep) {
    auto golden = [&](double lo, double hi, const std::function<double(double)>& f) {
      const double g = 0.5 * (std::sqrt(5.0) - 1);
      double a = lo, b = hi;
      for (int it = 0; it < 80; ++it) {
        const double x1 = b - g * (b - a), x2 = a + g * (b - a);
        (f(x1) < f(x2) ? b : a) = f(x1) < f(x2) ? x2 : x1;
      }
      return 0.5 * (a + b);
    };
    bt = golden(std::max(0.0, bt - 0.02), bt + 0.02, [&](double t) { return cn(br, t); });
    br = golden(std::max(0.0, br - 0.02), br + 0.02, [&](double r) { return cn(r, bt); });
  }
  best = cn(br, bt);
  const bool pass = std::abs(best + 0.7853) <= 1e-3 && std::abs(br) <= 5e-3 &&
                    std::abs(bt - 0.7538) <= 5e-3;
  std::string detail = fmt("min C_norm = %.4f at (r, tau) = (%.4f, %.4f); target -0.7853 at (0, 0.7538)",
                           best, br, bt);

  // Diagnostic: the typeset phase sign, sampled on a 200-point tau grid over [0, 3].
  const auto& p = std::get<LdhoParams>(m.kernel());
  double pbest = 1e300, pt = 0;
  for (int j = 0; j < 200; ++j) {
    const double tau = 3.0 * j / 199;
    if (printed_sign_norm(p, tau) < pbest) {
      pbest = printed_sign_norm(p, tau);
      pt = tau;
    }
  }
  const double t50 = 3.0 * 50 / 199;
  detail += fmt("; diagnostic: with the phase sign as typeset, C_norm(0, %.5f) = %.4f and the grid minimum "
                "is %.4f at tau = %.4f",
                t50, printed_sign_norm(p, t50), pbest, pt);
  detail += fmt(", but that form disagrees with the spectral oracle (%.4f at (0, %.4f))",
                kernel_oracle(m, 0.0, bt).value / c00, bt);
  return {pass, detail};
}

// ---- 2 ------------------------------------------------------------------

std::vector<KernelModel> variants(int d) {
  std::vector<KernelModel> out;
  for (Dispersion disp : {Dispersion::Quadratic, Dispersion::Linear}) {
    out.emplace_back(LdhoParams::from_damped(1.0, 3.0, 1.5 * kPi, Regime::Underdamped, 1.0, 0.4, disp, d));
    out.emplace_back(LdhoParams::from_damped(1.0, 0.8, 0.1 * kPi, Regime::Overdamped, 1.5, 0.4, disp, d));
    out.emplace_back(LdhoParams(1.0, 0.8, 0.625, 1.0, 0.4, disp, d));
  }
  out.emplace_back(OuParams(1.0, 0.8, 0.5, 0.4, 1.0, Dispersion::Quadratic, d));
  out.emplace_back(OuParams(1.0, 0.8, 0.5, 0.4, 1.0, Dispersion::Linear, d));
  return out;
}

Outcome oracle_equivalence() {
  Philox4x64 rng(2024);
  double worst = 0.0;
  int count = 0, bad = 0;
  for (int d = 1; d <= 3; ++d)
    for (const auto& m : variants(d)) {
      const double c00 = kernel_variance(m);
      for (int i = 0; i < 25; ++i) {
        const double r = 3.0 * rng.uniform(), tau = 3.0 * rng.uniform();
        const OracleResult o = kernel_oracle(m, r, tau);
        const double tol = std::max(1e-6 * c00, 5 * o.error);
        const double ratio = std::abs(m(r, tau) - o.value) / tol;
        worst = std::max(worst, ratio);
        bad += ratio > 1.0;
        ++count;
      }
    }
  return {bad == 0, fmt("%.0f points (8 variants x d=1..3 x 25), %.0f outside tolerance, max |diff|/tol = %.2e",
                        count, bad, worst)};
}

// ---- 3 ------------------------------------------------------------------

Outcome ode_order() {
  const std::vector<std::pair<const char*, LdhoParams>> cases{
      {"underdamped", LdhoParams(1.0, 2.0, 5.0, 1, 0, Dispersion::Quadratic, 1)},
      {"critical", LdhoParams(1.0, 0.1, 5.0, 1, 0, Dispersion::Quadratic, 1)},
      {"overdamped", LdhoParams(1.0, 0.05, 5.0, 1, 0, Dispersion::Quadratic, 1)}};
  const double hs[3] = {1e-2, 5e-3, 2.5e-3};
  bool pass = true;
  std::string detail;
  for (const auto& [name, p] : cases) {
    double res[3];
    for (int i = 0; i < 3; ++i) res[i] = std::abs(ode_residual(p, 1.0, hs[i]));
    const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
    pass = pass && std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2;
    detail += std::string(detail.empty() ? "" : "; ") + name + fmt(" orders %.3f, %.3f", o1, o2);
  }
  return {pass, detail};
}

// ---- 4 ------------------------------------------------------------------

Outcome gram_psd() {
  Philox4x64 rng(4);
  std::vector<SpaceTimePoint> pts(300);
  for (auto& p : pts) {
    p.s = {10.0 * rng.uniform(), 10.0 * rng.uniform()};
    p.t = 20.0 * rng.uniform();
  }
  bool pass = true;
  double worst = 1e300;
  for (const char* name : {"fig1", "fig2", "fig3", "ou1", "ou2"}) {
    const GramMatrix g = gram(preset_model(name), pts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values, Eigen::EigenvaluesOnly);
    const double ratio = es.eigenvalues().minCoeff() / g.values.trace();
    worst = std::min(worst, ratio);
    pass = pass && ratio >= -1e-8;
  }
  return {pass, fmt("300 points, 5 presets, smallest min-eigenvalue/trace = %.3e", worst)};
}

// ---- 5 ------------------------------------------------------------------

Outcome separability() {
  double worst = 0.0;
  int degenerate = 0;
  for (const auto& m0 : variants(2)) {
    KernelModel m = m0;
    if (const auto* p = std::get_if<LdhoParams>(&m0.kernel())) m = KernelModel(p->with_interaction(0.0));
    if (const auto* p = std::get_if<OuParams>(&m0.kernel())) {
      OuParams q = *p;
      q.scale = 0.0;
      m = KernelModel(q);
    }
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const InteractionRatio q = interaction_ratio(m, 0.15 * i, 0.15 * j);
        if (q.degenerate) {
          ++degenerate;
          continue;
        }
        worst = std::max(worst, std::abs(q.value - 1.0));
      }
  }
  const KernelModel s2 = preset_model("s2");
  double qmin = 1e300, qmax = -1e300;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const InteractionRatio q = interaction_ratio(s2, 0.25 * i, 0.1 * j);
      if (q.degenerate) continue;
      qmin = std::min(qmin, q.value);
      qmax = std::max(qmax, q.value);
    }
  const bool pass = worst <= 1e-10 && qmin < 1.0 && qmax > 1.0;
  return {pass, fmt("max |Q-1| without interaction = %.2e (%.0f flagged lags); interaction preset Q in [%.3f, %.3f]",
                    worst, degenerate, qmin, qmax)};
}

// ---- 6 ------------------------------------------------------------------

Outcome limits() {
  double worst_a = 0.0, worst_b = 0.0;
  for (Dispersion disp : {Dispersion::Quadratic, Dispersion::Linear}) {
    const auto over = LdhoParams::from_damped(1.0, 0.8, 1e-8, Regime::Overdamped, 1.0, 0.4, disp, 2);
    const LdhoParams crit(1.0, 0.8, 0.625, 1.0, 0.4, disp, 2);
    const double c00 = ldho_kernel(crit, 0, 0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        worst_a = std::max(worst_a, std::abs(ldho_kernel(over, 0.3 * i, 0.3 * j) -
                                             ldho_kernel(crit, 0.3 * i, 0.3 * j)) / c00);
  }
  const LdhoParams big(1.0, 1e6, 1.5 * kPi, 1.0, 0.4, Dispersion::Quadratic, 2);
  const double c00 = ldho_kernel(big, 0, 0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      worst_b = std::max(worst_b, std::abs(ldho_kernel(big, 0.3 * i, 0.3 * j) -
                                           vlrt_kernel(big, 0.3 * i, 0.3 * j)) / c00);
  return {worst_a <= 1e-5 && worst_b <= 1e-4,
          fmt("(a) overdamped vs critical max rel diff %.2e; (b) underdamped vs VLRT max rel diff %.2e",
              worst_a, worst_b)};
}

// ---- 7 ------------------------------------------------------------------

KernelModel loop_truth() {
  const LdhoParams u = LdhoParams::from_damped(1.0, 2.0, kPi / 2, Regime::Underdamped, 2.0, 0.5,
                                               Dispersion::Quadratic, 2);
  return KernelModel(u.with_c0(1.0 / ldho_kernel(u, 0, 0)), 0.05);
}

Outcome closed_loop() {
  const KernelModel truth = loop_truth();
  const std::vector<double> t = theta_of(truth);
  std::vector<double> mean(t.size(), 0.0);
  bool improved = true;
  const int seeds = 5;
  std::vector<std::string> names;
  for (int s = 0; s < seeds; ++s) {
    const FieldRealization f = simulate_field(truth, GridSpec{{64, 64}, {1.0, 1.0}, 128, 0.25, 1000 + static_cast<std::uint64_t>(s)});
    const VariogramSet v = compute_variograms(f);
    const FitResult marg = fit_marginals(v, Family::Ldho, Dispersion::Quadratic);
    const FitResult full = fit_full(v, marg.model);
    improved = improved && full.objective < joint_objective(marg.model, v);
    for (std::size_t i = 0; i < t.size(); ++i) mean[i] += full.theta_star[i] / seeds;
    names = full.names;
  }
  bool pass = improved;
  std::string detail;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double rel = std::abs(mean[i] - t[i]) / t[i];
    pass = pass && rel <= 0.25;
    detail += (i ? ", " : "") + names[i] + fmt(" %.4g (truth %.4g, %.1f%%)", mean[i], t[i], 100 * rel);
  }
  detail += improved ? "; joint objective improved on every seed" : "; joint objective did NOT improve on every seed";
  return {pass, "64x64x128 grid, 5 seeds, mean estimates: " + detail};
}

// ---- 8 ------------------------------------------------------------------

Outcome prediction_ratio_identity() {
  Philox4x64 rng(8);
  const std::vector<KernelModel> models{preset_model("s2"), preset_model("fig1"), preset_model("lin1"),
                                        preset_model("ou1")};
  double worst = 0.0;
  int done = 0, skipped = 0;
  while (done < 50) {
    const KernelModel& m = models[static_cast<std::size_t>(done) % models.size()];
    SpaceTimeDataset data;
    data.mean = rng.normal();
    data.points = {{{2 * rng.uniform(), 2 * rng.uniform()}, 2 * rng.uniform()}};
    data.values = {data.mean + rng.normal()};
    const std::vector<SpaceTimePoint> q{{{2 * rng.uniform(), 2 * rng.uniform()}, 2 * rng.uniform()}};
    const InteractionRatio r = prediction_ratio(m, data.points[0], q[0]);
    if (r.degenerate) {
      ++skipped;
      continue;
    }
    const double full = predict(m, data, q).mean(0) - data.mean;
    const double sep = predict(m.surrogate(), data, q).mean(0) - data.mean;
    const double ir = interaction_ratio(m, std::hypot(q[0].s[0] - data.points[0].s[0], q[0].s[1] - data.points[0].s[1]),
                                        q[0].t - data.points[0].t).value;
    worst = std::max({worst, std::abs(full / sep - ir) / std::max(1.0, std::abs(ir)),
                      std::abs(r.value - ir)});
    ++done;
  }
  return {worst <= 1e-10, fmt("50 configurations over 4 presets (%.0f degenerate draws redrawn), max rel deviation %.2e",
                              skipped, worst)};
}

// ---- 9 ------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "stk_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const KernelModel truth = loop_truth();
  save_model(truth, (dir / "truth.json").string());
  std::string detail;
  bool pass = true;
  // Library level.
  for (int run = 0; run < 2; ++run) {
    const FieldRealization f = simulate_field(truth, GridSpec{{32, 32}, {1.0, 1.0}, 64, 0.25, 77});
    const fs::path sub = dir / ("lib" + std::to_string(run));
    fs::create_directories(sub);
    write_field(f, (sub / "field.bin").string(), (sub / "field.json").string());
    const VariogramSet v = compute_variograms(f);
    const FitResult marg = fit_marginals(v, Family::Ldho, Dispersion::Quadratic);
    std::ofstream(sub / "fit.json") << fit_to_json(fit_full(v, marg.model)).dump(2);
  }
  for (const char* file : {"field.bin", "field.json", "fit.json"})
    pass = pass && slurp(dir / "lib0" / file) == slurp(dir / "lib1" / file);
  detail = pass ? "library reruns byte-identical" : "library reruns differ";
  // Command-line level.
  if (!cli.empty()) {
    bool cli_ok = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path sub = dir / ("cli" + std::to_string(run));
      const std::string base = "\"" + cli + "\" --model \"" + (dir / "truth.json").string() +
                               "\" --seed 77 --out \"" + sub.string() + "\" ";
      cli_ok = cli_ok && std::system((base + "simulate --n 32,32 --nt 64 --dt 0.25 > /dev/null").c_str()) == 0;
      cli_ok = cli_ok && std::system(("\"" + cli + "\" --out \"" + sub.string() + "\" fit --field \"" +
                                      (sub / "field.json").string() + "\" > /dev/null").c_str()) == 0;
    }
    for (const char* file : {"field.bin", "field.json", "fit.json", "model_fit.json"}) {
      const std::string a = slurp(dir / "cli0" / file), b = slurp(dir / "cli1" / file);
      cli_ok = cli_ok && !a.empty() && a == b;
    }
    pass = pass && cli_ok;
    detail += cli_ok ? "; CLI simulate and fit reruns byte-identical" : "; CLI reruns differ or failed";
  } else {
    detail += "; CLI not given, command-level rerun skipped";
  }
  fs::remove_all(dir);
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  report(1, "hole effect", hole_effect);
  report(2, "oracle equivalence", oracle_equivalence);
  report(3, "generative ODE residual order", ode_order);
  report(4, "Gram PSD", gram_psd);
  report(5, "separability switch", separability);
  report(6, "limits", limits);
  report(7, "simulate-estimate-fit closed loop", closed_loop);
  report(8, "prediction-ratio identity", prediction_ratio_identity);
  report(9, "determinism", [&] { return determinism(cli); });
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
