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
#include "stk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stk/bessel.hpp"
#include "stk/errors.hpp"
#include "stk/kernel.hpp"
#include "stk/quadrature.hpp"

namespace stk {

namespace {

constexpr double kPi = std::numbers::pi;

double dispersion_power(Dispersion d, double k) {
  return d == Dispersion::Quadratic ? k * k : k;
}

const LdhoParams* ldho_of(const KernelModel& m) {
  return std::get_if<LdhoParams>(&m.kernel());
}

const OuParams* ou_of(const KernelModel& m) {
  return std::get_if<OuParams>(&m.kernel());
}

// Log of the spectral envelope relative to k = 0, and its decay rate.
struct Envelope {
  Dispersion dispersion;
  double rate;
};

Envelope envelope_of(const KernelModel& m) {
  if (const auto* p = ldho_of(m)) return {p->dispersion(), p->epsilon()};
  if (const auto* p = ou_of(m)) return {p->dispersion, p->beta};
  const auto& base = std::get<SeparableSurrogate>(m.kernel()).base;
  if (const auto* p = std::get_if<LdhoParams>(&base))
    return {p->dispersion(), p->epsilon()};
  const auto& o = std::get<OuParams>(base);
  return {o.dispersion, o.beta};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(max_wavenumber > 0.0)) throw ConfigError("k_max must be positive");
  if (node_count < 64) throw ConfigError("node_count must be at least 64");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ConfigError("quadrature tolerances must be positive");
}

QuadratureSpec QuadratureSpec::for_model(const KernelModel& m) {
  QuadratureSpec q;
  q.max_wavenumber = mode_cutoff(m);
  return q;
}

nlohmann::json report_to_json(const AdmissibilityReport& r) {
  nlohmann::json j;
  j["min_spectral_value"] = r.min_spectral_value;
  j["max_spectral_value"] = r.max_spectral_value;
  if (std::isfinite(r.integrability_proxy))
    j["integrability_proxy"] = r.integrability_proxy;
  else
    j["integrability_proxy"] = "inf";
  j["pass"] = r.pass;
  return j;
}

double temporal_spectral_density(const LdhoParams& p, double omega) {
  const double w0 = p.omega0();
  const double tc = p.tau_c();
  const double sigma_sq = 2.0 * p.c0() * w0 * w0 * tc;
  const double x = omega * omega - w0 * w0;
  return sigma_sq / (tc * tc * x * x + omega * omega);
}

double st_spectral_density(const LdhoParams& p, double k, double omega) {
  if (!(k >= 0.0)) throw DomainError("wavenumber must be non-negative");
  const double w0 = p.omega0();
  const double tc = p.tau_c();
  const double sigma0_sq = 2.0 * p.c0() * w0 * w0 * tc;
  const double kp = dispersion_power(p.dispersion(), k);
  const double b = 1.0 + p.interaction() * kp;
  const double a = std::exp(-p.epsilon() * kp) * b;
  const double x = omega * omega - w0 * w0 * b * b;
  return sigma0_sq * a / (omega * omega + x * x * tc * tc / (b * b));
}

double st_spectral_density(const OuParams& p, double k, double omega) {
  if (!(k >= 0.0)) throw DomainError("wavenumber must be non-negative");
  const double kp = dispersion_power(p.dispersion, k);
  const double rate = (p.a + p.scale * kp) / p.tau_c;
  return p.sigma0_sq * std::exp(-p.beta * kp) * 2.0 * rate /
         (rate * rate + omega * omega);
}

double st_spectral_density(const KernelModel& m, double k, double omega) {
  if (const auto* p = ldho_of(m)) return st_spectral_density(*p, k, omega);
  if (const auto* p = ou_of(m)) return st_spectral_density(*p, k, omega);
  throw ConfigError("no closed-form spectral density for a separable surrogate");
}

double temporal_fourier_mode(const LdhoParams& p, double k, double tau) {
  if (!(k >= 0.0)) throw DomainError("wavenumber must be non-negative");
  const double kp = dispersion_power(p.dispersion(), k);
  const double b = 1.0 + p.interaction() * kp;
  const double c0k = p.c0() * std::exp(-p.epsilon() * kp);
  return detail::temporal_kernel_raw(c0k, p.tau_c() / b, p.omega_d() * b,
                                     classify_regime(p), tau);
}

double temporal_fourier_mode(const OuParams& p, double k, double tau) {
  if (!(k >= 0.0)) throw DomainError("wavenumber must be non-negative");
  const double kp = dispersion_power(p.dispersion, k);
  return p.sigma0_sq * std::exp(-p.beta * kp) *
         std::exp(-std::abs(tau) * (p.a + p.scale * kp) / p.tau_c);
}

double temporal_fourier_mode(const KernelModel& m, double k, double tau) {
  if (const auto* p = ldho_of(m)) return temporal_fourier_mode(*p, k, tau);
  if (const auto* p = ou_of(m)) return temporal_fourier_mode(*p, k, tau);
  throw ConfigError("no temporal Fourier modes for a separable surrogate");
}

double mode_cutoff(const KernelModel& m, double fraction) {
  const Envelope env = envelope_of(m);
  const int d = m.dim();
  const double target = std::log(fraction);
  auto log_env = [&](double k) {
    return -env.rate * dispersion_power(env.dispersion, k) +
           (d + 2) * std::log(std::max(1.0, k));
  };
  double hi = 1.0;
  while (log_env(hi) > target) hi *= 2.0;
  double lo = hi / 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_env(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

OracleResult hankel_ift_oracle(const ModeFunction& mode, int d, double r,
                               double tau, const QuadratureSpec& q) {
  q.validate();
  if (d < 1 || d > 5) throw DomainError("oracle supports 1 <= d <= 5");
  if (!(r >= 0.0)) throw DomainError("spatial lag r must be non-negative");
  const double nu = 0.5 * d - 1.0;
  const double k_max = q.max_wavenumber;
  auto integrand = [&](double k) {
    const double power = d == 1 ? 1.0 : std::pow(k, d - 1);
    return power * bessel_j_scaled(nu, k * r) * mode(k, tau);
  };
  const double norm = std::pow(2.0 * kPi, -0.5 * d);
  OracleResult out;
  if (q.scheme == QuadratureScheme::FixedGaussLegendre) {
    const GaussLegendre& rule = gauss_legendre_32();
    auto sum_panels = [&](int panels) {
      double s = 0.0;
      const double h = k_max / panels;
      for (int i = 0; i < panels; ++i) s += rule.integrate(integrand, i * h, (i + 1) * h);
      return s;
    };
    const int panels = std::max(2, q.node_count / 32);
    const double fine = sum_panels(panels);
    const double coarse = sum_panels(panels / 2);
    out.value = norm * fine;
    out.error = norm * std::abs(fine - coarse);
    out.panels = panels;
    return out;
  }
  std::vector<double> breaks;
  const int uniform = 16;
  for (int i = 0; i <= uniform; ++i) breaks.push_back(k_max * i / uniform);
  if (r > 0.0) {
    for (int m = 1;; ++m) {
      const double z = bessel_zero_approx(nu, m) / r;
      if (z >= k_max) break;
      if (z > 0.0) breaks.push_back(z);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [k_max](double a, double b) {
                             return std::abs(a - b) < 1e-12 * k_max;
                           }),
               breaks.end());
  const IntegralEstimate est =
      integrate_panels(integrand, breaks, q.abs_tol, q.rel_tol);
  out.value = norm * est.value;
  out.error = norm * est.error;
  out.panels = est.panels;
  if (!est.converged)
    throw QuadratureFailure("oracle quadrature did not reach tolerance at r=" +
                            std::to_string(r) + ", tau=" + std::to_string(tau));
  return out;
}

OracleResult kernel_oracle(const KernelModel& m, double r, double tau) {
  const QuadratureSpec q = QuadratureSpec::for_model(m);
  auto mode = [&m](double k, double t) { return temporal_fourier_mode(m, k, t); };
  return hankel_ift_oracle(mode, m.dim(), r, tau, q);
}

namespace {

double tail_exponent(const std::vector<double>& k_grid,
                     const std::vector<double>& s_of_k, int d) {
  std::vector<double> xs;
  std::vector<double> ys;
  const std::size_t start = k_grid.size() - std::max<std::size_t>(2, k_grid.size() / 4);
  for (std::size_t i = start; i < k_grid.size(); ++i) {
    if (k_grid[i] > 0.0 && s_of_k[i] > 0.0 && std::isfinite(s_of_k[i])) {
      xs.push_back(std::log(k_grid[i]));
      ys.push_back(std::log(s_of_k[i]) + d * std::log(k_grid[i]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= 0.0) return std::numeric_limits<double>::infinity();
  return -sxy / sxx;
}

AdmissibilityReport scan(const DensityFunction& density,
                         const std::function<double(double)>& integrated,
                         int d, const std::vector<double>& k_grid,
                         const std::vector<double>& omega_grid) {
  if (k_grid.empty() || omega_grid.empty())
    throw ConfigError("admissibility scan needs non-empty grids");
  AdmissibilityReport rep;
  rep.min_spectral_value = std::numeric_limits<double>::infinity();
  rep.max_spectral_value = -std::numeric_limits<double>::infinity();
  for (double k : k_grid)
    for (double w : omega_grid) {
      const double v = density(k, w);
      rep.min_spectral_value = std::min(rep.min_spectral_value, v);
      rep.max_spectral_value = std::max(rep.max_spectral_value, v);
    }
  std::vector<double> sorted = k_grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> s_of_k(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) s_of_k[i] = integrated(sorted[i]);
  rep.integrability_proxy = tail_exponent(sorted, s_of_k, d);
  const double tol = 1e-12 * std::max(0.0, rep.max_spectral_value);
  rep.pass = rep.min_spectral_value >= -tol && rep.integrability_proxy > 0.0;
  return rep;
}

}  // namespace

AdmissibilityReport admissibility_scan(const KernelModel& m,
                                       const std::vector<double>& k_grid,
                                       const std::vector<double>& omega_grid) {
  auto density = [&m](double k, double w) { return st_spectral_density(m, k, w); };
  auto integrated = [&m](double k) { return temporal_fourier_mode(m, k, 0.0); };
  return scan(density, integrated, m.dim(), k_grid, omega_grid);
}

AdmissibilityReport admissibility_scan(const DensityFunction& density, int d,
                                       const std::vector<double>& k_grid,
                                       const std::vector<double>& omega_grid) {
  auto integrated = [&density](double k) {
    std::vector<double> breaks{0.0};
    for (double w : log_grid(1e-8, 1e8, 161)) breaks.push_back(w);
    auto f = [&](double w) { return density(k, w); };
    return integrate_panels(f, breaks, 1e-300, 1e-8, 30).value / kPi;
  };
  return scan(density, integrated, d, k_grid, omega_grid);
}

double ode_residual(const LdhoParams& p, double tau, double h) {
  if (!(h > 0.0)) throw DomainError("step h must be positive");
  if (!(std::abs(tau) > 5.0 * h))
    throw DomainError("ode_residual needs |tau| > 5h");
  auto c = [&p](double t) { return temporal_kernel(p, t); };
  const double f0 = c(tau);
  const double fm1 = c(tau - h), fp1 = c(tau + h);
  const double fm2 = c(tau - 2 * h), fp2 = c(tau + 2 * h);
  const double d4 = (fm2 - 4.0 * fm1 + 6.0 * f0 - 4.0 * fp1 + fp2) / (h * h * h * h);
  const double d2 = (fm1 - 2.0 * f0 + fp1) / (h * h);
  const double w0 = p.omega0();
  const double tc = p.tau_c();
  return d4 + (2.0 * w0 * w0 - 1.0 / (tc * tc)) * d2 + w0 * w0 * w0 * w0 * f0;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("bad log grid");
  std::vector<double> g(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace stk
