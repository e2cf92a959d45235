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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stk/optimize.hpp"
#include "stk/params.hpp"
#include "stk/variogram.hpp"

namespace stk {

enum class Family { Ldho, Ou };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct VariogramConfig {
  int spatial_bins = 10;       // multiples of the smallest grid spacing
  int temporal_bins = 32;      // multiples of dt
  int st_spatial_bins = 7;     // includes r = 0
  int st_temporal_bins = 17;   // includes tau = 0
  int st_temporal_stride = 2;  // tau bins every stride*dt
  double lag_tolerance = -1.0; // spatial half-width; < 0 means half the spacing
};

struct VariogramSet {
  EmpiricalVariogram spatial;
  EmpiricalVariogram temporal;
  EmpiricalVariogram spacetime;
  int dim = 0;
};

VariogramSet compute_variograms(const FieldRealization& f,
                                const VariogramConfig& cfg = {}, int threads = 0);
VariogramSet compute_variograms(const SpaceTimeDataset& data,
                                const VariogramConfig& cfg = {});

// Box constraints per named hyperparameter; missing names get data-driven
// defaults. Names: c1, epsilon, omega_d, tau_c, b_or_xi, nugget (LDHO) and
// c1, beta, a, scale, nugget (O-U).
struct FitBounds {
  std::map<std::string, std::pair<double, double>> box;
};

struct FitResult {
  explicit FitResult(KernelModel m) : model(std::move(m)) {}

  KernelModel model;
  double objective = 0.0;
  double objective_theta0 = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = true;
  std::string regime;  // LDHO only
  std::vector<std::string> names;
  std::vector<double> theta0;
  std::vector<double> theta_star;
  std::vector<double> trace;
};

// Reported hyperparameter vector of a model (c1 is the kernel variance).
std::vector<std::string> theta_names(Family f);
std::vector<double> theta_of(const KernelModel& m);

// WLS objective of m against the space-time variogram.
double joint_objective(const KernelModel& m, const VariogramSet& v);

FitResult fit_marginals(const VariogramSet& v, Family family, Dispersion dispersion,
                        const FitBounds& bounds = {},
                        const NelderMeadOptions& opt = {});
FitResult fit_full(const VariogramSet& v, const KernelModel& theta0,
                   const FitBounds& bounds = {}, const NelderMeadOptions& opt = {});

nlohmann::json fit_to_json(const FitResult& r);
FitBounds bounds_from_json(const nlohmann::json& j);

}  // namespace stk
