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
#include "stk/gp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "stk/errors.hpp"
#include "stk/model_json.hpp"

namespace stk {

void SpaceTimeDataset::validate() const {
  if (points.empty()) throw EmptyDataset("dataset has no observations");
  if (points.size() != values.size())
    throw DimensionMismatch("dataset points and values differ in length");
  const std::size_t d = points[0].s.size();
  for (const auto& p : points)
    if (p.s.size() != d) throw DimensionMismatch("dataset points differ in dimension");
}

long cholesky_in_place(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double djj = a(j, j);
    if (j > 0) djj -= a.row(j).head(j).squaredNorm();
    if (!(djj > 0.0)) return static_cast<long>(j);
    const double ljj = std::sqrt(djj);
    a(j, j) = ljj;
    if (j + 1 < n) {
      const Eigen::Index rest = n - j - 1;
      if (j > 0)
        a.col(j).tail(rest).noalias() -=
            a.bottomLeftCorner(rest, j) * a.row(j).head(j).transpose();
      a.col(j).tail(rest) /= ljj;
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return -1;
}

namespace {

double lag(const KernelModel& m, const SpaceTimePoint& a, const SpaceTimePoint& b,
           std::vector<double>& buf) {
  buf.resize(a.s.size());
  for (std::size_t i = 0; i < a.s.size(); ++i) buf[i] = a.s[i] - b.s[i];
  return m.spatial_lag(buf);
}

void check_dims(const KernelModel& m, const std::vector<SpaceTimePoint>& pts) {
  for (const auto& p : pts)
    if (static_cast<int>(p.s.size()) != m.dim())
      throw DimensionMismatch("point dimension " + std::to_string(p.s.size()) +
                              " does not match model dim " +
                              std::to_string(m.dim()));
}

Eigen::MatrixXd cross_covariance(const KernelModel& m,
                                 const std::vector<SpaceTimePoint>& rows,
                                 const std::vector<SpaceTimePoint>& cols) {
  Eigen::MatrixXd k(rows.size(), cols.size());
  std::vector<double> buf;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      k(i, j) = m(lag(m, rows[i], cols[j], buf), rows[i].t - cols[j].t);
  return k;
}

}  // namespace

GramMatrix gram(const KernelModel& m, const std::vector<SpaceTimePoint>& pts,
                int threads) {
  check_dims(m, pts);
  const std::size_t n = pts.size();
  GramMatrix g;
  g.source = model_to_json(m).dump();
  g.values.resize(n, n);
  const double diag = kernel_variance(m) + m.nugget();
  auto rows = [&](std::size_t begin, std::size_t end) {
    std::vector<double> buf;
    for (std::size_t i = begin; i < end; ++i) {
      g.values(i, i) = diag;
      for (std::size_t j = i + 1; j < n; ++j)
        g.values(i, j) = m(lag(m, pts[i], pts[j], buf), pts[i].t - pts[j].t);
    }
  };
  unsigned nt = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, std::max<std::size_t>(1, n / 32));
  if (nt <= 1) {
    rows(0, n);
  } else {
    // Row blocks of roughly equal upper-triangle work.
    std::vector<std::size_t> cut{0};
    const double total = 0.5 * n * n;
    for (unsigned b = 1; b < nt; ++b) {
      const double frac = static_cast<double>(b) / nt;
      cut.push_back(static_cast<std::size_t>(n - std::sqrt((1.0 - frac) * 2.0 * total)));
    }
    cut.push_back(n);
    std::vector<std::jthread> pool;
    for (unsigned b = 0; b < nt; ++b) pool.emplace_back(rows, cut[b], cut[b + 1]);
  }
  g.values.triangularView<Eigen::StrictlyLower>() = g.values.transpose();
  return g;
}

Prediction predict(const KernelModel& m, const SpaceTimeDataset& data,
                   const std::vector<SpaceTimePoint>& query) {
  data.validate();
  check_dims(m, data.points);
  check_dims(m, query);
  const double c00 = kernel_variance(m);
  const Eigen::MatrixXd k = gram(m, data.points, 1).values;
  Eigen::MatrixXd l;
  double jitter = 0.0;
  long pivot = -1;
  const double start = m.nugget() > 0.0 ? m.nugget() : 1e-12 * c00;
  for (double j = 0.0;;) {
    l = k;
    l.diagonal().array() += j;
    pivot = cholesky_in_place(l);
    if (pivot < 0) {
      jitter = j;
      break;
    }
    j = j == 0.0 ? start : 10.0 * j;
    if (j > std::max(1e-6 * c00, start) * (1.0 + 1e-12))
      throw NotPositiveDefinite(
          "Gram matrix is not positive definite (pivot " + std::to_string(pivot) +
              ") even with diagonal jitter up to 1e-6*C(0,0)",
          static_cast<std::size_t>(pivot));
  }
  Eigen::VectorXd z(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) z(i) = data.values[i] - data.mean;
  const auto tri = l.triangularView<Eigen::Lower>();
  const Eigen::VectorXd alpha = l.transpose().triangularView<Eigen::Upper>().solve(tri.solve(z));
  const Eigen::MatrixXd ks = cross_covariance(m, data.points, query);
  const Eigen::MatrixXd v = tri.solve(ks);

  Prediction out;
  out.jitter = jitter;
  out.mean = (ks.transpose() * alpha).array() + data.mean;
  out.variance.resize(query.size());
  const double prior = c00 + m.nugget();
  for (std::size_t q = 0; q < query.size(); ++q) {
    const double var = prior - v.col(q).squaredNorm();
    if (var < -1e-10 * prior)
      throw NegativeVariance("predictive variance " + std::to_string(var) +
                             " at query " + std::to_string(q));
    out.variance(q) = std::max(var, 0.0);
  }
  return out;
}

InteractionRatio prediction_ratio(const KernelModel& m, const SpaceTimePoint& obs,
                                  const SpaceTimePoint& query) {
  check_dims(m, {obs, query});
  std::vector<double> buf;
  return interaction_ratio(m, lag(m, query, obs, buf), query.t - obs.t);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    out.push_back(cell);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& path, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path + ": row " + std::to_string(row) + ": bad number '" + s + "'");
  }
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw EmptyDataset(path + ": empty file");
  t.header = split(line);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw ConfigError(path + ": row " + std::to_string(row) + " has " +
                        std::to_string(cells.size()) + " columns, expected " +
                        std::to_string(t.header.size()));
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(parse_number(c, path, row));
    t.rows.push_back(std::move(v));
  }
  return t;
}

int spatial_columns(const Table& t, const std::string& path) {
  int d = 0;
  while (d < static_cast<int>(t.header.size()) &&
         t.header[d] == "s" + std::to_string(d + 1))
    ++d;
  if (d == 0 || d >= static_cast<int>(t.header.size()) || t.header[d] != "t")
    throw ConfigError(path + ": header must start with s1,...,sd,t");
  return d;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SpaceTimeDataset read_dataset_csv(const std::string& path) {
  const Table t = read_table(path);
  const int d = spatial_columns(t, path);
  if (static_cast<int>(t.header.size()) < d + 2 || t.header[d + 1] != "z")
    throw ConfigError(path + ": dataset header must be s1,...,sd,t,z");
  SpaceTimeDataset data;
  for (const auto& r : t.rows) {
    data.points.push_back({std::vector<double>(r.begin(), r.begin() + d), r[d]});
    data.values.push_back(r[d + 1]);
  }
  if (data.points.empty()) throw EmptyDataset(path + ": dataset has no observations");
  return data;
}

void write_dataset_csv(const SpaceTimeDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const int d = data.dim();
  for (int i = 0; i < d; ++i) out << "s" << i + 1 << ",";
  out << "t,z\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double s : data.points[i].s) out << fmt(s) << ",";
    out << fmt(data.points[i].t) << "," << fmt(data.values[i]) << "\n";
  }
}

std::vector<SpaceTimePoint> read_points_csv(const std::string& path) {
  const Table t = read_table(path);
  const int d = spatial_columns(t, path);
  std::vector<SpaceTimePoint> pts;
  for (const auto& r : t.rows)
    pts.push_back({std::vector<double>(r.begin(), r.begin() + d), r[d]});
  return pts;
}

void write_predictions_csv(const std::vector<SpaceTimePoint>& query,
                           const Prediction& pred, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const std::size_t d = query.empty() ? 0 : query[0].s.size();
  for (std::size_t i = 0; i < d; ++i) out << "s" << i + 1 << ",";
  out << "t,mean,variance\n";
  for (std::size_t q = 0; q < query.size(); ++q) {
    for (double s : query[q].s) out << fmt(s) << ",";
    out << fmt(query[q].t) << "," << fmt(pred.mean(q)) << ","
        << fmt(pred.variance(q)) << "\n";
  }
}

}  // namespace stk
