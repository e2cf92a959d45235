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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stk/gp.hpp"
#include "stk/params.hpp"

namespace stk {

// Regular space-time grid. Values are stored C-order with time as the
// slowest axis: index = ((it * n1 + i1) * n2 + i2) ...
struct GridSpec {
  std::vector<int> n_space;   // nodes per spatial axis (1 to 3 axes)
  std::vector<double> ds;     // spacing per spatial axis [L]
  int nt = 2;                 // time nodes
  double dt = 1.0;            // [T]
  std::uint64_t seed = 0;

  int dim() const { return static_cast<int>(n_space.size()); }
  std::size_t nodes_per_slice() const;
  std::size_t size() const { return nodes_per_slice() * static_cast<std::size_t>(nt); }
  void validate() const;
};

nlohmann::json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);

struct FieldRealization {
  GridSpec grid;
  std::vector<double> values;
  nlohmann::json model;       // provenance
  std::string rng;            // generator identity
  std::vector<std::string> warnings;
  double imag_to_rms = 0.0;   // max |Im| / RMS(Re) before the imaginary part was dropped
};

FieldRealization simulate_field(const KernelModel& m, const GridSpec& g);

// Lag in grid units: one integer offset per spatial axis plus a time offset.
struct GridLag {
  std::vector<int> ds;
  int dt = 0;
};

// Average of (z(x+lag) - mean)(z(x) - mean) over all in-grid pairs.
std::vector<double> empirical_covariance(const FieldRealization& f,
                                         const std::vector<GridLag>& lags,
                                         double mean = 0.0);

void write_field(const FieldRealization& f, const std::string& bin_path,
                 const std::string& json_path);
FieldRealization read_field(const std::string& json_path);
void write_field_csv(const FieldRealization& f, const std::string& path);
SpaceTimeDataset field_to_dataset(const FieldRealization& f);

}  // namespace stk
