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

#include <Eigen/Dense>

#include "stk/kernel.hpp"
#include "stk/params.hpp"

namespace stk {

struct SpaceTimePoint {
  std::vector<double> s;  // [L]
  double t = 0.0;         // [T]
};

struct SpaceTimeDataset {
  std::vector<SpaceTimePoint> points;
  std::vector<double> values;
  double mean = 0.0;

  std::size_t size() const { return points.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].s.size()); }
  void validate() const;
};

struct GramMatrix {
  Eigen::MatrixXd values;
  std::string source;  // compact JSON of the generating model
};

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  double jitter = 0.0;  // diagonal jitter that was needed beyond the nugget
};

// Lower Cholesky factor of a symmetric matrix. Returns the index of the
// first non-positive pivot, or -1 on success.
long cholesky_in_place(Eigen::MatrixXd& a);

GramMatrix gram(const KernelModel& m, const std::vector<SpaceTimePoint>& pts,
                int threads = 0);

Prediction predict(const KernelModel& m, const SpaceTimeDataset& data,
                   const std::vector<SpaceTimePoint>& query);

InteractionRatio prediction_ratio(const KernelModel& m,
                                  const SpaceTimePoint& obs,
                                  const SpaceTimePoint& query);

// CSV with header s1,...,sd,t,z.
SpaceTimeDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const SpaceTimeDataset& data, const std::string& path);
// CSV with header s1,...,sd,t (extra columns ignored).
std::vector<SpaceTimePoint> read_points_csv(const std::string& path);
void write_predictions_csv(const std::vector<SpaceTimePoint>& query,
                           const Prediction& pred, const std::string& path);

}  // namespace stk
