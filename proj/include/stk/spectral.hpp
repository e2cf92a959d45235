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

#include "json.hpp"
#include "stk/params.hpp"

namespace stk {

enum class QuadratureScheme { AdaptivePanel, FixedGaussLegendre };

struct QuadratureSpec {
  double max_wavenumber = 0.0;  // k_max [1/L]
  int node_count = 256;         // FixedGaussLegendre only
  QuadratureScheme scheme = QuadratureScheme::AdaptivePanel;
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;

  void validate() const;
  // k_max chosen where the spectral envelope of m falls below 1e-14 of its
  // value at k = 0.
  static QuadratureSpec for_model(const KernelModel& m);
};

struct OracleResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

struct AdmissibilityReport {
  double min_spectral_value = 0.0;
  double max_spectral_value = 0.0;
  double integrability_proxy = 0.0;  // tail exponent of k^d S(k), negated
  bool pass = false;
};

nlohmann::json report_to_json(const AdmissibilityReport& r);

using ModeFunction = std::function<double(double k, double tau)>;
using DensityFunction = std::function<double(double k, double omega)>;

double temporal_spectral_density(const LdhoParams& p, double omega);
double st_spectral_density(const LdhoParams& p, double k, double omega);
double st_spectral_density(const OuParams& p, double k, double omega);
double st_spectral_density(const KernelModel& m, double k, double omega);

double temporal_fourier_mode(const LdhoParams& p, double k, double tau);
double temporal_fourier_mode(const OuParams& p, double k, double tau);
double temporal_fourier_mode(const KernelModel& m, double k, double tau);

// Smallest k with envelope(k) * max(1,k)^(d+2) <= fraction * envelope(0).
double mode_cutoff(const KernelModel& m, double fraction = 1e-14);

OracleResult hankel_ift_oracle(const ModeFunction& mode, int d, double r,
                               double tau, const QuadratureSpec& q);
// Oracle applied to the temporal Fourier modes of m.
OracleResult kernel_oracle(const KernelModel& m, double r, double tau);

AdmissibilityReport admissibility_scan(const KernelModel& m,
                                       const std::vector<double>& k_grid,
                                       const std::vector<double>& omega_grid);
AdmissibilityReport admissibility_scan(const DensityFunction& density, int d,
                                       const std::vector<double>& k_grid,
                                       const std::vector<double>& omega_grid);

// Central-difference residual of the fourth-order generative ODE applied to
// the temporal kernel at lag tau with step h.
double ode_residual(const LdhoParams& p, double tau, double h);

std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace stk
