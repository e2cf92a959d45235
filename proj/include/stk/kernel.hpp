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

#include <utility>

#include "stk/params.hpp"

namespace stk {

struct InteractionFunctions {
  double kappa_sq;   // [1/L^2]
  double lambda_sq;  // [1/L^2]
  double phi;        // [rad], in (-pi, 0]
};

struct InteractionRatio {
  double value;
  bool degenerate;  // a marginal vanished; value is NaN
};

Regime classify_regime(const LdhoParams& p);
double damped_frequency(const LdhoParams& p);

double temporal_kernel(const LdhoParams& p, double tau);
std::pair<double, double> fast_slow_times(const LdhoParams& p);

InteractionFunctions interaction_functions_quadratic(const LdhoParams& p,
                                                     double tau);

double ldho_kernel(const LdhoParams& p, double r, double tau);
// Evaluates the closed form of a given regime regardless of the
// classification, using the stored damped frequency. Meant for limit studies
// near the regime boundaries.
double ldho_kernel_in_regime(const LdhoParams& p, Regime regime, double r,
                             double tau);

double ou_kernel(const OuParams& p, double r, double tau);
double vlrt_kernel(const LdhoParams& p, double r, double tau);

double marginal_spatial(const LdhoParams& p, double r);
double marginal_spatial(const OuParams& p, double r);
double marginal_spatial(const KernelModel& m, double r);
double marginal_temporal(const LdhoParams& p, double tau);
double marginal_temporal(const OuParams& p, double tau);
double marginal_temporal(const KernelModel& m, double tau);

// C(0,0) without nugget.
double kernel_variance(const KernelModel& m);

InteractionRatio interaction_ratio(const KernelModel& m, double r, double tau);
double separable_surrogate(const KernelModel& m, double r, double tau);

namespace detail {
// Temporal kernel from explicit (c0, tau_c, omega_d, regime); used to build
// the wavenumber-dependent temporal Fourier modes.
double temporal_kernel_raw(double c0, double tau_c, double omega_d,
                           Regime regime, double tau);
}  // namespace detail

}  // namespace stk
