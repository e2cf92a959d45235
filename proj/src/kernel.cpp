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
#include "stk/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stk/errors.hpp"

namespace stk {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this value of s = 2 tau_c omega_d the overdamped combination is
// evaluated from its Taylor series in s.
constexpr double kSeriesThreshold = 1e-4;

// Gamma((d+1)/2) / pi^((d+1)/2), the normalization of the radial Fourier
// transform of exp(-a k).
double cauchy_norm(int d) {
  const double h = 0.5 * (d + 1);
  return std::tgamma(h) / std::pow(kPi, h);
}

// Value of T(beta) at beta = 1 and the first three derivatives of log T.
struct LogDerivs {
  double t, l1, l2, l3;
};

// Computes ((1+s) T(1-s) - (1-s) T(1+s)) / (2 s), the bracket of every
// overdamped closed form, without cancellation for small s.
template <class Term, class Derivs>
double slow_fast_combination(double s, Term term, Derivs derivs) {
  if (s < kSeriesThreshold) {
    const LogDerivs d = derivs();
    const double t1 = d.t * d.l1;
    const double t2 = d.t * (d.l2 + d.l1 * d.l1);
    const double t3 = d.t * (d.l3 + 3.0 * d.l1 * d.l2 + d.l1 * d.l1 * d.l1);
    return (d.t - t1) + s * s * (3.0 * t2 - t3) / 6.0;
  }
  const double bs = 1.0 - s;
  const double bf = 1.0 + s;
  return (bf * term(bs) - bs * term(bf)) / (2.0 * s);
}

double temporal_impl(double c0, double tau_c, double omega_d, Regime regime,
                     double tau) {
  const double t = std::abs(tau);
  const double q = t / (2.0 * tau_c);
  switch (regime) {
    case Regime::Underdamped: {
      const double w = omega_d * t;
      return c0 * std::exp(-q) *
             (std::cos(w) + std::sin(w) / (2.0 * omega_d * tau_c));
    }
    case Regime::Critical:
      return c0 * std::exp(-q) * (1.0 + q);
    case Regime::Overdamped: {
      const double s = 2.0 * tau_c * omega_d;
      auto term = [q](double beta) { return std::exp(-beta * q); };
      auto derivs = [q]() { return LogDerivs{std::exp(-q), -q, 0.0, 0.0}; };
      return c0 * slow_fast_combination(s, term, derivs);
    }
  }
  return 0.0;
}

double quadratic_underdamped(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double wd = p.omega_d();
  const double b = p.interaction();
  const double eps = p.epsilon();
  const int d = p.dim();
  const double q = t / (2.0 * tc);
  const double ar = eps + b * q;
  const double ai = b * wd * t;
  const double den = (b * t / tc + 2.0 * eps) * (b * t / tc + 2.0 * eps) +
                     (2.0 * b * wd * t) * (2.0 * b * wd * t);
  const double kappa_sq = b * wd * t / den;
  const double lambda_sq = ar / den;
  const double phi = std::atan2(-2.0 * b * wd * t * tc, b * t + 2.0 * eps * tc);
  const double mag = std::exp(-lambda_sq * r * r) /
                     (std::pow(4.0 * kPi, 0.5 * d) *
                      std::pow(ar * ar + ai * ai, 0.25 * d));
  const double theta = wd * t - kappa_sq * r * r - 0.5 * d * phi;
  return p.c0() * std::exp(-q) * mag *
         (std::cos(theta) + std::sin(theta) / (2.0 * wd * tc));
}

double quadratic_overdamped(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double b = p.interaction();
  const double eps = p.epsilon();
  const double d = p.dim();
  const double q = t / (2.0 * tc);
  const double s = 2.0 * tc * p.omega_d();
  auto term = [&](double beta) {
    const double alpha = eps + b * beta * q;
    return std::exp(-beta * q) * std::pow(4.0 * kPi * alpha, -0.5 * d) *
           std::exp(-r * r / (4.0 * alpha));
  };
  auto derivs = [&]() {
    const double alpha = eps + b * q;
    const double pp = b * q;
    const double a2 = alpha * alpha;
    const double r2 = r * r;
    LogDerivs ld;
    ld.t = term(1.0);
    ld.l1 = -q - 0.5 * d * pp / alpha + r2 * pp / (4.0 * a2);
    ld.l2 = 0.5 * d * pp * pp / a2 - r2 * pp * pp / (2.0 * a2 * alpha);
    ld.l3 = -d * pp * pp * pp / (a2 * alpha) +
            1.5 * r2 * pp * pp * pp / (a2 * a2);
    return ld;
  };
  return p.c0() * slow_fast_combination(s, term, derivs);
}

double quadratic_critical(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double b = p.interaction();
  const double d = p.dim();
  const double q = t / (2.0 * tc);
  const double big_d = b * t + 2.0 * p.epsilon() * tc;
  const double r2 = r * r;
  const double bracket = 1.0 + q -
                         (r2 * b * t * tc / (2.0 * big_d * big_d) -
                          d * b * t / (2.0 * big_d));
  return p.c0() * std::pow(tc / (2.0 * kPi * big_d), 0.5 * d) *
         std::exp(-q - r2 * tc / (2.0 * big_d)) * bracket;
}

double linear_underdamped(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double wd = p.omega_d();
  const double xi = p.interaction();
  const int d = p.dim();
  const double q = t / (2.0 * tc);
  const double a_re = p.epsilon() + xi * q;
  const double a_im = xi * wd * t;
  const double r2 = r * r;
  // |alpha^2 + r^2|^2 written as a sum of squares.
  const double x = a_re * a_re - a_im * a_im + r2;
  const double y = 2.0 * a_im * a_re;
  const double g0 = cauchy_norm(d) * std::hypot(a_re, a_im) /
                    std::pow(x * x + y * y, 0.25 * (d + 1));
  const double gamma = std::atan2(y, x);
  const double phi = std::atan2(a_im, a_re);
  const double theta = wd * t + 0.5 * (d + 1) * gamma - phi;
  return p.c0() * std::exp(-q) * g0 *
         (std::cos(theta) + std::sin(theta) / (2.0 * wd * tc));
}

double linear_overdamped(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double xi = p.interaction();
  const double eps = p.epsilon();
  const double d = p.dim();
  const double q = t / (2.0 * tc);
  const double s = 2.0 * tc * p.omega_d();
  const double norm = cauchy_norm(p.dim());
  const double r2 = r * r;
  auto term = [&](double beta) {
    const double a = eps + xi * beta * q;
    return std::exp(-beta * q) * norm * a / std::pow(a * a + r2, 0.5 * (d + 1));
  };
  auto derivs = [&]() {
    const double a = eps + xi * q;
    const double pp = xi * q;
    const double u = a * a + r2;
    LogDerivs ld;
    ld.t = term(1.0);
    ld.l1 = -q + pp / a - (d + 1) * a * pp / u;
    ld.l2 = -pp * pp / (a * a) - (d + 1) * pp * pp * (r2 - a * a) / (u * u);
    ld.l3 = 2.0 * pp * pp * pp / (a * a * a) -
            (d + 1) * pp * pp * pp * (2.0 * a * a * a - 6.0 * a * r2) /
                (u * u * u);
    return ld;
  };
  return p.c0() * slow_fast_combination(s, term, derivs);
}

double linear_critical(const LdhoParams& p, double r, double t) {
  const double tc = p.tau_c();
  const double xi = p.interaction();
  const double d = p.dim();
  const double q = t / (2.0 * tc);
  const double a = p.epsilon() + xi * q;
  const double u = a * a + r * r;
  const double norm = cauchy_norm(p.dim());
  const double c1 = norm * a / std::pow(u, 0.5 * (d + 1));
  const double c2 = norm * (d * a * a - r * r) / std::pow(u, 0.5 * (d + 3));
  return p.c0() * std::exp(-q) * ((1.0 + q) * c1 + xi * q * c2);
}

double ldho_dispatch(const LdhoParams& p, Regime regime, double r, double tau) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("spatial lag r must be finite and non-negative");
  const double t = std::abs(tau);
  const bool quad = p.dispersion() == Dispersion::Quadratic;
  switch (regime) {
    case Regime::Underdamped:
      return quad ? quadratic_underdamped(p, r, t) : linear_underdamped(p, r, t);
    case Regime::Overdamped:
      return quad ? quadratic_overdamped(p, r, t) : linear_overdamped(p, r, t);
    case Regime::Critical:
      return quad ? quadratic_critical(p, r, t) : linear_critical(p, r, t);
  }
  return 0.0;
}

}  // namespace

Regime classify_regime(const LdhoParams& p) {
  const double x = p.omega0() * p.tau_c() - 0.5;
  if (std::abs(x) <= kCriticalTolerance) return Regime::Critical;
  return x > 0.0 ? Regime::Underdamped : Regime::Overdamped;
}

double damped_frequency(const LdhoParams& p) {
  return classify_regime(p) == Regime::Critical ? 0.0 : p.omega_d();
}

double temporal_kernel(const LdhoParams& p, double tau) {
  return temporal_impl(p.c0(), p.tau_c(), p.omega_d(), classify_regime(p), tau);
}

std::pair<double, double> fast_slow_times(const LdhoParams& p) {
  if (classify_regime(p) != Regime::Overdamped)
    throw RegimeError("slow and fast times exist only in the overdamped regime");
  const double s = 2.0 * p.tau_c() * p.omega_d();
  return {2.0 * p.tau_c() / (1.0 - s), 2.0 * p.tau_c() / (1.0 + s)};
}

InteractionFunctions interaction_functions_quadratic(const LdhoParams& p,
                                                     double tau) {
  if (p.dispersion() != Dispersion::Quadratic ||
      classify_regime(p) != Regime::Underdamped)
    throw RegimeError(
        "interaction functions need quadratic dispersion and underdamping");
  const double t = std::abs(tau);
  const double tc = p.tau_c();
  const double b = p.interaction();
  const double wd = p.omega_d();
  const double eps = p.epsilon();
  const double den = (b * t / tc + 2.0 * eps) * (b * t / tc + 2.0 * eps) +
                     (2.0 * b * wd * t) * (2.0 * b * wd * t);
  InteractionFunctions f;
  f.kappa_sq = b * wd * t / den;
  f.lambda_sq = (eps + b * t / (2.0 * tc)) / den;
  f.phi = std::atan2(-2.0 * b * wd * t * tc, b * t + 2.0 * eps * tc);
  return f;
}

double ldho_kernel(const LdhoParams& p, double r, double tau) {
  return ldho_dispatch(p, classify_regime(p), r, tau);
}

double ldho_kernel_in_regime(const LdhoParams& p, Regime regime, double r,
                             double tau) {
  const Regime actual = classify_regime(p);
  if (regime == Regime::Underdamped &&
      (actual == Regime::Overdamped || p.omega_d() <= 0.0))
    throw RegimeError("parameters do not admit the underdamped form");
  if (regime == Regime::Overdamped &&
      (actual == Regime::Underdamped || p.omega_d() <= 0.0))
    throw RegimeError("parameters do not admit the overdamped form");
  return ldho_dispatch(p, regime, r, tau);
}

double ou_kernel(const OuParams& p, double r, double tau) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("spatial lag r must be finite and non-negative");
  const double t = std::abs(tau);
  const double c = p.beta + p.scale * t / p.tau_c;
  const double decay = std::exp(-p.a * t / p.tau_c);
  if (p.dispersion == Dispersion::Quadratic) {
    return p.sigma0_sq * decay * std::pow(4.0 * kPi * c, -0.5 * p.dim) *
           std::exp(-r * r / (4.0 * c));
  }
  return p.sigma0_sq * cauchy_norm(p.dim) * c * decay /
         std::pow(r * r + c * c, 0.5 * (p.dim + 1));
}

double vlrt_kernel(const LdhoParams& p, double r, double tau) {
  if (p.dispersion() != Dispersion::Quadratic)
    throw RegimeError("the very-large-relaxation-time limit needs quadratic dispersion");
  if (!(r >= 0.0)) throw DomainError("spatial lag r must be non-negative");
  const double t = std::abs(tau);
  const double eps = p.epsilon();
  const double bw = p.interaction() * p.omega0() * t;
  const double den = eps * eps + bw * bw;
  const double lambda0_sq = eps / (4.0 * den);
  const double kappa0_sq = bw / (4.0 * den);
  const double phi0 = std::atan2(-bw, eps);
  const double d = p.dim();
  return p.c0() * std::exp(-lambda0_sq * r * r) *
         std::cos(p.omega0() * t - kappa0_sq * r * r - 0.5 * d * phi0) /
         (std::pow(4.0 * kPi, 0.5 * d) * std::pow(den, 0.25 * d));
}

double marginal_spatial(const LdhoParams& p, double r) {
  return ldho_kernel(p, r, 0.0);
}

double marginal_spatial(const OuParams& p, double r) {
  return ou_kernel(p, r, 0.0);
}

double marginal_temporal(const LdhoParams& p, double tau) {
  return ldho_kernel(p, 0.0, tau);
}

double marginal_temporal(const OuParams& p, double tau) {
  return ou_kernel(p, 0.0, tau);
}

namespace {

template <class F>
double visit_base(const KernelModel& m, F f) {
  const KernelVariant& k = m.kernel();
  if (const auto* p = std::get_if<LdhoParams>(&k)) return f(*p);
  if (const auto* p = std::get_if<OuParams>(&k)) return f(*p);
  return std::visit(f, std::get<SeparableSurrogate>(k).base);
}

}  // namespace

double marginal_spatial(const KernelModel& m, double r) {
  return visit_base(m, [r](const auto& p) { return marginal_spatial(p, r); });
}

double marginal_temporal(const KernelModel& m, double tau) {
  return visit_base(m,
                    [tau](const auto& p) { return marginal_temporal(p, tau); });
}

double kernel_variance(const KernelModel& m) { return marginal_spatial(m, 0.0); }

InteractionRatio interaction_ratio(const KernelModel& m, double r, double tau) {
  const double c00 = kernel_variance(m);
  const double cs = marginal_spatial(m, r);
  const double ct = marginal_temporal(m, tau);
  const double tol = 1e-12 * std::abs(c00);
  if (std::abs(cs) <= tol || std::abs(ct) <= tol)
    return {std::numeric_limits<double>::quiet_NaN(), true};
  return {c00 * m(r, tau) / (cs * ct), false};
}

namespace detail {
double temporal_kernel_raw(double c0, double tau_c, double omega_d,
                           Regime regime, double tau) {
  return temporal_impl(c0, tau_c, omega_d, regime, tau);
}
}  // namespace detail

double separable_surrogate(const KernelModel& m, double r, double tau) {
  return marginal_spatial(m, r) * marginal_temporal(m, tau) /
         kernel_variance(m);
}

}  // namespace stk
