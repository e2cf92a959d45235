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
#include "stk/params.hpp"

#include <cmath>

#include "stk/errors.hpp"
#include "stk/kernel.hpp"

namespace stk {

std::string to_string(Dispersion d) {
  return d == Dispersion::Quadratic ? "quadratic" : "linear";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Underdamped:
      return "underdamped";
    case Regime::Critical:
      return "critical";
    case Regime::Overdamped:
      return "overdamped";
  }
  return "unknown";
}

Dispersion dispersion_from_string(const std::string& s) {
  if (s == "quadratic") return Dispersion::Quadratic;
  if (s == "linear") return Dispersion::Linear;
  throw ConfigError("unknown dispersion '" + s + "' (expected quadratic|linear)");
}

Regime regime_from_string(const std::string& s) {
  if (s == "underdamped") return Regime::Underdamped;
  if (s == "critical") return Regime::Critical;
  if (s == "overdamped") return Regime::Overdamped;
  throw ConfigError("unknown regime '" + s + "'");
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

LdhoParams::LdhoParams(double c0, double tau_c, double omega0, double epsilon,
                       double interaction, Dispersion dispersion, int dim)
    : c0_(c0),
      tau_c_(tau_c),
      omega0_(omega0),
      epsilon_(epsilon),
      interaction_(interaction),
      dispersion_(dispersion),
      dim_(dim) {
  validate();
  omega_d_ = std::sqrt(std::abs(omega0 * omega0 - 0.25 / (tau_c * tau_c)));
}

LdhoParams LdhoParams::from_damped(double c0, double tau_c, double omega_d,
                                   Regime regime, double epsilon,
                                   double interaction, Dispersion dispersion,
                                   int dim) {
  require(std::isfinite(omega_d) && omega_d >= 0.0,
          "damped frequency must be finite and non-negative");
  require(std::isfinite(tau_c) && tau_c > 0.0, "tau_c must be positive");
  const double half_rate = 0.5 / tau_c;
  LdhoParams p;
  p.c0_ = c0;
  p.tau_c_ = tau_c;
  p.epsilon_ = epsilon;
  p.interaction_ = interaction;
  p.dispersion_ = dispersion;
  p.dim_ = dim;
  switch (regime) {
    case Regime::Underdamped:
      require(omega_d > 0.0, "underdamped regime needs omega_d > 0");
      p.omega0_ = std::hypot(omega_d, half_rate);
      p.omega_d_ = omega_d;
      break;
    case Regime::Overdamped:
      require(omega_d > 0.0 && omega_d < half_rate,
              "overdamped regime needs 0 < omega_d < 1/(2 tau_c)");
      p.omega0_ = std::sqrt((half_rate - omega_d) * (half_rate + omega_d));
      p.omega_d_ = omega_d;
      break;
    case Regime::Critical:
      p.omega0_ = half_rate;
      p.omega_d_ = 0.0;
      break;
  }
  p.validate();
  return p;
}

void LdhoParams::validate() const {
  require(finite_all({c0_, tau_c_, omega0_, epsilon_, interaction_}),
          "LDHO parameters must be finite");
  require(c0_ > 0.0, "c0 must be positive");
  require(tau_c_ > 0.0, "tau_c must be positive");
  require(omega0_ > 0.0, "omega0 must be positive");
  require(epsilon_ > 0.0, "epsilon must be positive");
  require(interaction_ >= 0.0, "interaction (b or xi) must be non-negative");
  require(dim_ >= 1, "dim must be at least 1");
}

LdhoParams LdhoParams::with_c0(double c0) const {
  LdhoParams p = *this;
  p.c0_ = c0;
  p.validate();
  return p;
}

LdhoParams LdhoParams::with_interaction(double value) const {
  LdhoParams p = *this;
  p.interaction_ = value;
  p.validate();
  return p;
}

LdhoParams LdhoParams::with_dim(int dim) const {
  LdhoParams p = *this;
  p.dim_ = dim;
  p.validate();
  return p;
}

OuParams::OuParams(double sigma0_sq_, double tau_c_, double a_, double scale_,
                   double beta_, Dispersion dispersion_, int dim_)
    : sigma0_sq(sigma0_sq_),
      tau_c(tau_c_),
      a(a_),
      scale(scale_),
      beta(beta_),
      dispersion(dispersion_),
      dim(dim_) {
  require(finite_all({sigma0_sq, tau_c, a, scale, beta}),
          "O-U parameters must be finite");
  require(sigma0_sq > 0.0, "sigma0_sq must be positive");
  require(tau_c > 0.0, "tau_c must be positive");
  require(a > 0.0, "a must be positive");
  require(scale >= 0.0, "scale must be non-negative");
  require(beta > 0.0, "beta must be positive");
  require(dim >= 1, "dim must be at least 1");
}

KernelModel::KernelModel(KernelVariant kernel, double nugget,
                         std::vector<double> length_scales)
    : kernel_(std::move(kernel)),
      nugget_(nugget),
      length_scales_(std::move(length_scales)) {
  require(std::isfinite(nugget_) && nugget_ >= 0.0,
          "nugget must be finite and non-negative");
  if (!length_scales_.empty()) {
    if (static_cast<int>(length_scales_.size()) != dim())
      throw DimensionMismatch("length_scales must have one entry per axis");
    for (double l : length_scales_)
      require(std::isfinite(l) && l > 0.0, "length scales must be positive");
  }
}

namespace {

int base_dim(const std::variant<LdhoParams, OuParams>& b) {
  return std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, LdhoParams>)
          return p.dim();
        else
          return p.dim;
      },
      b);
}

}  // namespace

int KernelModel::dim() const {
  if (const auto* p = std::get_if<LdhoParams>(&kernel_)) return p->dim();
  if (const auto* p = std::get_if<OuParams>(&kernel_)) return p->dim;
  return base_dim(std::get<SeparableSurrogate>(kernel_).base);
}

double KernelModel::spatial_lag(std::span<const double> ds) const {
  if (static_cast<int>(ds.size()) != dim())
    throw DimensionMismatch("spatial lag has " + std::to_string(ds.size()) +
                            " components, model dim is " +
                            std::to_string(dim()));
  double s = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double x = length_scales_.empty() ? ds[i] : ds[i] / length_scales_[i];
    s += x * x;
  }
  return std::sqrt(s);
}

double KernelModel::operator()(double r, double tau) const {
  if (const auto* p = std::get_if<LdhoParams>(&kernel_))
    return ldho_kernel(*p, r, tau);
  if (const auto* p = std::get_if<OuParams>(&kernel_))
    return ou_kernel(*p, r, tau);
  return separable_surrogate(*this, r, tau);
}

KernelModel KernelModel::surrogate() const {
  if (is_surrogate()) return *this;
  if (const auto* p = std::get_if<LdhoParams>(&kernel_))
    return KernelModel(SeparableSurrogate{*p}, nugget_, length_scales_);
  return KernelModel(SeparableSurrogate{std::get<OuParams>(kernel_)}, nugget_,
                     length_scales_);
}

KernelModel KernelModel::with_nugget(double nugget) const {
  return KernelModel(kernel_, nugget, length_scales_);
}

}  // namespace stk
