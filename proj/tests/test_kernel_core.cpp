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
#include <cmath>

#include "doctest.h"
#include "stk/errors.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/presets.hpp"
#include "stk/spectral.hpp"
#include "test_util.hpp"

using namespace stk;
using stk_test::close_rel;
using stk_test::kPi;

namespace {
const Dispersion Q = Dispersion::Quadratic;
const Dispersion L = Dispersion::Linear;
}  // namespace

TEST_CASE("classify_regime thresholds") {
  CHECK(classify_regime(LdhoParams(1, 1, 1, 1, 0, Q, 1)) == Regime::Underdamped);
  CHECK(classify_regime(LdhoParams(1, 0.5, 1, 1, 0, Q, 1)) == Regime::Critical);
  CHECK(classify_regime(LdhoParams(1, 0.8, 0.3125, 1, 0, Q, 1)) == Regime::Overdamped);
}

TEST_CASE("damped_frequency") {
  CHECK(damped_frequency(LdhoParams(1, 0.5, 1, 1, 0, Q, 1)) == 0.0);
  CHECK(damped_frequency(LdhoParams(1, 1, 5, 1, 0, Q, 1)) ==
        doctest::Approx(std::sqrt(24.75)).epsilon(1e-15));
  const double big = damped_frequency(LdhoParams(1, 1e8, 2.0, 1, 0, Q, 1));
  CHECK(big == doctest::Approx(2.0).epsilon(1e-14));
  // Overdamped: magnitude of the imaginary part.
  CHECK(damped_frequency(LdhoParams(1, 0.8, 0.3125, 1, 0, Q, 1)) ==
        doctest::Approx(std::sqrt(1.0 / (4 * 0.64) - 0.3125 * 0.3125)));
}

TEST_CASE("from_damped keeps the quoted damped frequency") {
  const auto p = LdhoParams::from_damped(1, 3, 1.5 * kPi, Regime::Underdamped, 1, 0.4, Q, 2);
  CHECK(p.omega_d() == 1.5 * kPi);
  CHECK(p.omega0() == doctest::Approx(std::sqrt(2.25 * kPi * kPi + 1.0 / 36.0)));
  CHECK_THROWS_AS(LdhoParams::from_damped(1, 1, 0.6, Regime::Overdamped, 1, 0, Q, 1), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(LdhoParams(-1, 1, 1, 1, 0, Q, 1), DomainError);
  CHECK_THROWS_AS(LdhoParams(1, 0, 1, 1, 0, Q, 1), DomainError);
  CHECK_THROWS_AS(LdhoParams(1, 1, 1, 0, 0, Q, 1), DomainError);
  CHECK_THROWS_AS(LdhoParams(1, 1, 1, 1, -0.1, Q, 1), DomainError);
  CHECK_THROWS_AS(LdhoParams(1, 1, 1, 1, 0, Q, 0), DomainError);
  CHECK_THROWS_AS(OuParams(1, 1, 0, 0.1, 1, Q, 1), DomainError);
  CHECK_THROWS_AS(KernelModel(LdhoParams(1, 1, 1, 1, 0, Q, 1), -1.0), DomainError);
}

TEST_CASE("temporal_kernel examples") {
  for (auto p : {LdhoParams(2.5, 1, 3, 1, 0, Q, 1), LdhoParams(2.5, 0.5, 1, 1, 0, Q, 1),
                 LdhoParams(2.5, 0.8, 0.3125, 1, 0, Q, 1)})
    CHECK(temporal_kernel(p, 0.0) == doctest::Approx(2.5).epsilon(1e-14));
  const LdhoParams crit(2.0, 0.7, 1.0 / 1.4, 1, 0, Q, 1);
  REQUIRE(classify_regime(crit) == Regime::Critical);
  CHECK(temporal_kernel(crit, 1.4) == doctest::Approx(4.0 / std::exp(1.0)).epsilon(1e-14));
  const LdhoParams under(1.0, 2.0, 3.0, 1, 0, Q, 1);
  CHECK(temporal_kernel(under, 0.7) == temporal_kernel(under, -0.7));
}

TEST_CASE("fast_slow_times") {
  const auto p = LdhoParams::from_damped(1, 1, 0.25, Regime::Overdamped, 1, 0, Q, 1);
  const auto [ts, tf] = fast_slow_times(p);
  CHECK(ts == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(tf == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  const auto near = LdhoParams::from_damped(1, 1, 1e-4, Regime::Overdamped, 1, 0, Q, 1);
  const auto [ns, nf] = fast_slow_times(near);
  CHECK(ns == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(nf == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(fast_slow_times(LdhoParams(1, 1, 3, 1, 0, Q, 1)), RegimeError);
}

TEST_CASE("interaction functions") {
  const auto p = LdhoParams::from_damped(1, 3, 1.5 * kPi, Regime::Underdamped, 1, 0.4, Q, 2);
  const auto f0 = interaction_functions_quadratic(p, 0.0);
  CHECK(f0.kappa_sq == 0.0);
  CHECK(f0.lambda_sq == doctest::Approx(0.25));
  CHECK(f0.phi == 0.0);
  const auto fb = interaction_functions_quadratic(p.with_interaction(0.0), 2.3);
  CHECK(fb.kappa_sq == 0.0);
  CHECK(fb.lambda_sq == doctest::Approx(0.25));
  CHECK(fb.phi == 0.0);
  // Hand substitution at tau = 1: den = (0.4/3 + 2)^2 + (0.4 * 3 pi)^2.
  const double den = std::pow(0.4 / 3 + 2, 2) + std::pow(1.2 * kPi, 2);
  const auto f1 = interaction_functions_quadratic(p, 1.0);
  CHECK(f1.kappa_sq == doctest::Approx(0.6 * kPi / den).epsilon(1e-14));
  CHECK(f1.lambda_sq == doctest::Approx((1 + 0.2 / 3) / den).epsilon(1e-14));
  CHECK(f1.phi == doctest::Approx(std::atan2(-3.6 * kPi, 0.4 + 6)).epsilon(1e-14));
  CHECK(f1.phi <= 0.0);
  CHECK_THROWS_AS(interaction_functions_quadratic(
                      LdhoParams::from_damped(1, 3, 1, Regime::Underdamped, 1, 0.4, L, 2), 1.0),
                  RegimeError);
}

TEST_CASE("spatial slice of the quadratic kernels is the square exponential") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& m : stk_test::all_variants(d)) {
      const auto* p = std::get_if<LdhoParams>(&m.kernel());
      if (p == nullptr || p->dispersion() != Q) continue;
      for (double r : {0.0, 0.4, 1.7}) {
        const double want = p->c0() * std::exp(-r * r / (4 * p->epsilon())) /
                            std::pow(4 * kPi * p->epsilon(), 0.5 * d);
        CHECK(ldho_kernel(*p, r, 0.0) == doctest::Approx(want).epsilon(1e-13));
        CHECK(marginal_spatial(*p, r) == doctest::Approx(want).epsilon(1e-13));
      }
    }
}

TEST_CASE("negative lag distance is rejected") {
  const LdhoParams p(1, 1, 3, 1, 0.2, Q, 2);
  CHECK_THROWS_AS(ldho_kernel(p, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(ou_kernel(OuParams(1, 1, 0.5, 0.2, 1, Q, 2), -0.1, 0.0), DomainError);
}

TEST_CASE("zero-lag marginal values") {
  for (int d = 1; d <= 3; ++d) {
    const LdhoParams lin(1.7, 1, 3, 0.6, 0.2, L, d);
    const double want = 1.7 * std::tgamma(0.5 * (d + 1)) /
                        (std::pow(kPi, 0.5 * (d + 1)) * std::pow(0.6, d));
    CHECK(marginal_spatial(lin, 0.0) == doctest::Approx(want).epsilon(1e-13));
    const OuParams ou(1.7, 1, 0.5, 0.2, 0.6, Q, d);
    CHECK(marginal_spatial(ou, 0.0) ==
          doctest::Approx(1.7 / std::pow(4 * kPi * 0.6, 0.5 * d)).epsilon(1e-13));
    CHECK(marginal_temporal(ou, 0.0) == doctest::Approx(marginal_spatial(ou, 0.0)));
  }
}

TEST_CASE("temporal marginal without interaction is a product") {
  const auto p = LdhoParams::from_damped(1.1, 2, 1.5 * kPi, Regime::Underdamped, 3, 0.0, Q, 2);
  for (double tau : {0.0, 0.3, 1.9})
    CHECK(marginal_temporal(p, tau) ==
          doctest::Approx(temporal_kernel(p, tau) / (4 * kPi * 3)).epsilon(1e-13));
  const auto over = LdhoParams::from_damped(1.1, 0.8, 0.1 * kPi, Regime::Overdamped, 8, 0.4, Q, 2);
  CHECK(marginal_temporal(over, 0.0) == doctest::Approx(ldho_kernel(over, 0, 0)).epsilon(1e-14));
}

TEST_CASE("marginal consistency for every variant") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& m : stk_test::all_variants(d))
      for (double x : {0.0, 0.35, 1.2, 2.8}) {
        CHECK(close_rel(marginal_spatial(m, x), m(x, 0.0), 1e-12));
        CHECK(close_rel(marginal_temporal(m, x), m(0.0, x), 1e-12));
      }
}

TEST_CASE("evenness and Cauchy-Schwarz bound") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& m : stk_test::all_variants(d)) {
      const double c00 = m(0, 0);
      CHECK(c00 > 0.0);
      for (double r : {0.0, 0.5, 1.5, 4.0})
        for (double tau : {0.1, 0.9, 3.3}) {
          CHECK(m(r, tau) == m(r, -tau));
          CHECK(std::abs(m(r, tau)) <= c00 * (1 + 1e-14));
        }
    }
}

TEST_CASE("regime continuity across critical damping") {
  for (Dispersion disp : {Q, L}) {
    const double tc = 0.9;
    const LdhoParams crit(1, tc, 0.5 / tc, 0.7, 0.3, disp, 2);
    const LdhoParams under(1, tc, (0.5 + 1e-6) / tc, 0.7, 0.3, disp, 2);
    const LdhoParams over(1, tc, (0.5 - 1e-6) / tc, 0.7, 0.3, disp, 2);
    REQUIRE(classify_regime(under) == Regime::Underdamped);
    REQUIRE(classify_regime(over) == Regime::Overdamped);
    const double c00 = ldho_kernel(crit, 0, 0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const double r = 0.3 * i, tau = 0.4 * j;
        const double c = ldho_kernel(crit, r, tau);
        CHECK(std::abs(ldho_kernel(under, r, tau) - c) <= 1e-4 * c00);
        CHECK(std::abs(ldho_kernel(over, r, tau) - c) <= 1e-4 * c00);
      }
  }
}

TEST_CASE("near-critical overdamped series matches the critical kernel") {
  for (Dispersion disp : {Q, L}) {
    const auto over = LdhoParams::from_damped(1, 0.8, 1e-8, Regime::Overdamped, 2, 0.4, disp, 2);
    const LdhoParams crit(1, 0.8, 0.625, 2, 0.4, disp, 2);
    const double c00 = ldho_kernel(crit, 0, 0);
    for (double r : {0.0, 0.7, 2.0})
      for (double tau : {0.0, 0.5, 3.0})
        CHECK(std::abs(ldho_kernel(over, r, tau) - ldho_kernel(crit, r, tau)) <= 1e-10 * c00);
  }
}

TEST_CASE("VLRT kernel") {
  const auto p0 = LdhoParams(1.2, 1e6, 2.0, 1.5, 0.0, Q, 2);
  for (double r : {0.0, 1.0})
    for (double tau : {0.3, 1.1})
      CHECK(vlrt_kernel(p0, r, tau) ==
            doctest::Approx(marginal_spatial(p0, r) * std::cos(2.0 * tau))
                .epsilon(1e-12));
  const LdhoParams p(1.2, 1e6, 2.0, 1.5, 0.4, Q, 2);
  for (double r : {0.0, 0.8, 2.2}) CHECK(vlrt_kernel(p, r, 0.0) == doctest::Approx(marginal_spatial(p, r)));
  CHECK_THROWS_AS(vlrt_kernel(LdhoParams(1, 10, 2, 1, 0.4, L, 2), 0.1, 0.1), RegimeError);

  // Sup-norm distance to the limit decreases with tau_c.
  double prev = 1e300;
  for (int k = 2; k <= 6; ++k) {
    const LdhoParams pk(1.0, std::pow(10.0, k), 2.0, 1.5, 0.4, Q, 2);
    double sup = 0.0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        sup = std::max(sup, std::abs(ldho_kernel(pk, 0.3 * i, 0.3 * j) - vlrt_kernel(pk, 0.3 * i, 0.3 * j)));
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("O-U closed forms") {
  for (int d = 1; d <= 3; ++d) {
    const OuParams lin(1.4, 0.8, 0.5, 0.4, 0.7, L, d);
    for (double r : {0.0, 0.6, 2.0}) {
      const double want = 1.4 * std::tgamma(0.5 * (d + 1)) * 0.7 /
                          (std::pow(kPi, 0.5 * (d + 1)) * std::pow(r * r + 0.49, 0.5 * (d + 1)));
      CHECK(ou_kernel(lin, r, 0.0) == doctest::Approx(want).epsilon(1e-13));
    }
    const OuParams sep(1.4, 0.8, 0.5, 0.0, 0.7, Q, d);
    for (double r : {0.0, 0.6})
      for (double tau : {0.2, 1.5})
        CHECK(ou_kernel(sep, r, tau) ==
              doctest::Approx(ou_kernel(sep, r, 0) * std::exp(-0.5 * tau / 0.8)).epsilon(1e-13));
  }
}

TEST_CASE("interaction ratio") {
  for (const auto& m : stk_test::all_variants(2))
    for (double r : {0.0, 0.5, 1.3}) {
      const auto q = interaction_ratio(m, r, 0.0);
      CHECK_FALSE(q.degenerate);
      CHECK(q.value == doctest::Approx(1.0).epsilon(1e-13));
    }
  const auto sep = LdhoParams::from_damped(1, 3, 1.5 * kPi, Regime::Underdamped, 1, 0.0, Q, 2);
  for (double r : {0.4, 1.1})
    for (double tau : {0.2, 0.45}) {
      const auto q = interaction_ratio(KernelModel(sep), r, tau);
      if (!q.degenerate) CHECK(std::abs(q.value - 1.0) <= 1e-10);
    }
  const KernelModel s2 = preset_model("s2");
  bool above = false, below = false;
  for (int i = 1; i <= 20; ++i)
    for (int j = 1; j <= 20; ++j) {
      const auto q = interaction_ratio(s2, 0.2 * i, 0.1 * j);
      if (q.degenerate) continue;
      above = above || q.value > 1.0;
      below = below || q.value < 1.0;
    }
  CHECK(above);
  CHECK(below);
  // Exact zero crossing of the temporal marginal is flagged, not divided by.
  const auto under = LdhoParams::from_damped(1, 2, kPi, Regime::Underdamped, 1, 0.0, Q, 1);
  double lo = 0.2, hi = 0.9;  // C_T changes sign in this interval
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (marginal_temporal(under, mid) > 0 ? lo : hi) = mid;
  }
  const auto qd = interaction_ratio(KernelModel(under), 0.5, lo);
  CHECK(qd.degenerate);
  CHECK(std::isnan(qd.value));
}

TEST_CASE("separable surrogate") {
  const KernelModel m = preset_model("s2");
  CHECK(separable_surrogate(m, 0.0, 0.7) == doctest::Approx(marginal_temporal(m, 0.7)));
  CHECK(separable_surrogate(m, 1.3, 0.0) == doctest::Approx(marginal_spatial(m, 1.3)));
  const double r = 0.9, tau = 0.35;
  CHECK(m(r, tau) / separable_surrogate(m, r, tau) ==
        doctest::Approx(interaction_ratio(m, r, tau).value).epsilon(1e-12));
  const KernelModel s = m.surrogate();
  CHECK(s.is_surrogate());
  CHECK(s(r, tau) == doctest::Approx(separable_surrogate(m, r, tau)).epsilon(1e-14));
}

TEST_CASE("length scales rescale spatial lags") {
  const KernelModel m(LdhoParams(1, 1, 3, 1, 0.2, Q, 2), 0.0, {2.0, 0.5});
  const double ds[2] = {1.0, 1.0};
  CHECK(m.spatial_lag(ds) == doctest::Approx(std::sqrt(0.25 + 4.0)));
  CHECK_THROWS_AS(KernelModel(LdhoParams(1, 1, 3, 1, 0.2, Q, 2), 0.0, {1.0}), DimensionMismatch);
}

TEST_CASE("model JSON round trip") {
  for (const auto& name : preset_names()) {
    const KernelModel m = preset_model(name).with_nugget(0.01);
    const KernelModel back = model_from_json(model_to_json(m));
    CHECK(model_to_json(back) == model_to_json(m));
    CHECK(back(0.7, 0.3) == m(0.7, 0.3));
  }
  const auto j = model_to_json(preset_model("fig1"));
  CHECK(j.at("family") == "ldho");
  CHECK(j.at("dispersion") == "quadratic");
  CHECK(j.at("params").contains("b_or_xi"));
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"family", "gneiting"}}), ConfigError);
}

TEST_CASE("figure presets carry the caption values") {
  const auto& p = std::get<LdhoParams>(preset_model("fig1").kernel());
  CHECK(p.omega_d() == 1.5 * kPi);
  CHECK(p.tau_c() == 3.0);
  CHECK(p.interaction() == 0.4);
  CHECK(p.epsilon() == 1.0);
  CHECK(p.dim() == 2);
  CHECK(classify_regime(std::get<LdhoParams>(preset_model("fig2").kernel())) == Regime::Overdamped);
  CHECK_THROWS_AS(preset_model("fig9"), ConfigError);
}
