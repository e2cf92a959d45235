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

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace stk {

enum class Dispersion { Quadratic, Linear };
enum class Regime { Underdamped, Critical, Overdamped };

// Half-width of the band around omega0 * tau_c = 1/2 that is treated as
// critical damping.
inline constexpr double kCriticalTolerance = 1e-9;

std::string to_string(Dispersion d);
std::string to_string(Regime r);
Dispersion dispersion_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

/**
 * Hyperparameters of a damped-harmonic-oscillator kernel.
 *
 * Units: c0 [z^2], tau_c [T], omega0 [1/T], epsilon [L^2] (quadratic) or
 * [L] (linear), interaction b [L^2] or xi [L]. The damped frequency is
 * derived from omega0 and tau_c unless the object was built from it.
 */
class LdhoParams {
 public:
  LdhoParams(double c0, double tau_c, double omega0, double epsilon,
             double interaction, Dispersion dispersion, int dim);

  // Builds the parameters from a damped frequency and the intended regime.
  // The damped frequency is kept verbatim (no round trip through omega0).
  static LdhoParams from_damped(double c0, double tau_c, double omega_d,
                                Regime regime, double epsilon,
                                double interaction, Dispersion dispersion,
                                int dim);

  double c0() const { return c0_; }
  double tau_c() const { return tau_c_; }
  double omega0() const { return omega0_; }
  double epsilon() const { return epsilon_; }
  double interaction() const { return interaction_; }
  Dispersion dispersion() const { return dispersion_; }
  int dim() const { return dim_; }
  // |sqrt(omega0^2 - 1/(4 tau_c^2))|, as stored at construction.
  double omega_d() const { return omega_d_; }

  LdhoParams with_c0(double c0) const;
  LdhoParams with_interaction(double value) const;
  LdhoParams with_dim(int dim) const;

 private:
  LdhoParams() = default;
  void validate() const;

  double c0_ = 1.0;
  double tau_c_ = 1.0;
  double omega0_ = 1.0;
  double epsilon_ = 1.0;
  double interaction_ = 0.0;
  Dispersion dispersion_ = Dispersion::Quadratic;
  int dim_ = 1;
  double omega_d_ = 0.0;
};

/**
 * Hyperparameters of an Ornstein-Uhlenbeck kernel with wavenumber dependent
 * relaxation rate B(k)/tau_c, B = a + scale*k^2 (quadratic) or a + scale*k
 * (linear), and spectral envelope exp(-beta k^2) or exp(-beta k).
 */
struct OuParams {
  OuParams(double sigma0_sq, double tau_c, double a, double scale, double beta,
           Dispersion dispersion, int dim);

  double sigma0_sq;
  double tau_c;
  double a;
  double scale;
  double beta;
  Dispersion dispersion;
  int dim;
};

// Separable model sharing the marginals of the wrapped kernel.
struct SeparableSurrogate {
  std::variant<LdhoParams, OuParams> base;
};

using KernelVariant = std::variant<LdhoParams, OuParams, SeparableSurrogate>;

/**
 * The evaluable covariance object: a kernel, a nugget variance and an
 * optional per-axis length scale applied to spatial lag vectors.
 */
class KernelModel {
 public:
  explicit KernelModel(KernelVariant kernel, double nugget = 0.0,
                       std::vector<double> length_scales = {});

  const KernelVariant& kernel() const { return kernel_; }
  double nugget() const { return nugget_; }
  const std::vector<double>& length_scales() const { return length_scales_; }
  int dim() const;
  bool is_surrogate() const {
    return std::holds_alternative<SeparableSurrogate>(kernel_);
  }

  // Covariance without the nugget.
  double operator()(double r, double tau) const;
  // Euclidean norm of the (optionally rescaled) spatial lag vector.
  double spatial_lag(std::span<const double> ds) const;

  KernelModel surrogate() const;
  KernelModel with_nugget(double nugget) const;

 private:
  KernelVariant kernel_;
  double nugget_;
  std::vector<double> length_scales_;
};

}  // namespace stk
