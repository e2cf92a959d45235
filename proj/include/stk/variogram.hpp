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

#include <string>
#include <vector>

#include "json.hpp"
#include "stk/gp.hpp"
#include "stk/params.hpp"
#include "stk/simulate.hpp"

namespace stk {

enum class VariogramKind { SpatialMarginal, TemporalMarginal, SpaceTime };

std::string to_string(VariogramKind k);
VariogramKind variogram_kind_from_string(const std::string& s);

struct VariogramBin {
  double r = 0.0;    // mean spatial lag of the contributing pairs
  double tau = 0.0;  // mean time lag of the contributing pairs
  double gamma = 0.0;
  std::size_t n = 0;
};

struct EmpiricalVariogram {
  VariogramKind kind = VariogramKind::SpatialMarginal;
  std::vector<VariogramBin> bins;
  double tolerance = 0.0;      // spatial bin half-width
  double tau_tolerance = 0.0;  // temporal bin half-width
  std::vector<std::string> warnings;
};

// Lag classes |lag - center| <= tolerance. Centers must be sorted and
// non-negative.
struct LagBins {
  std::vector<double> centers;
  double tolerance = 0.0;

  static LagBins regular(double step, int count, int first = 1,
                         double tolerance = -1.0, int stride = 1);
  // Index of the class containing x, or -1.
  int locate(double x) const;
};

EmpiricalVariogram spatial_marginal_variogram(const FieldRealization& f,
                                              const LagBins& bins,
                                              int threads = 0);
EmpiricalVariogram spatial_marginal_variogram(const SpaceTimeDataset& data,
                                              const LagBins& bins);
EmpiricalVariogram temporal_marginal_variogram(const FieldRealization& f,
                                               const LagBins& bins);
EmpiricalVariogram temporal_marginal_variogram(const SpaceTimeDataset& data,
                                               const LagBins& bins);
EmpiricalVariogram space_time_variogram(const FieldRealization& f,
                                        const LagBins& r_bins,
                                        const LagBins& tau_bins,
                                        int threads = 0);
EmpiricalVariogram space_time_variogram(const SpaceTimeDataset& data,
                                        const LagBins& r_bins,
                                        const LagBins& tau_bins);

// Half the median nearest-neighbour distance among distinct locations.
double default_lag_tolerance(const SpaceTimeDataset& data);

double model_variogram(const KernelModel& m, double r, double tau);

struct WlsValue {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

// Cressie's approximate weighted least squares: sum N (g_hat / g - 1)^2.
WlsValue wls_objective(const KernelModel& m, const EmpiricalVariogram& v);

nlohmann::json variogram_to_json(const EmpiricalVariogram& v);
EmpiricalVariogram variogram_from_json(const nlohmann::json& j);

}  // namespace stk
