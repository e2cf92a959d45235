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
#include "stk/simulate.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "stk/errors.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/rng.hpp"
#include "stk/spectral.hpp"

namespace stk {

std::size_t GridSpec::nodes_per_slice() const {
  std::size_t n = 1;
  for (int v : n_space) n *= static_cast<std::size_t>(v);
  return n;
}

void GridSpec::validate() const {
  if (n_space.empty() || n_space.size() > 3)
    throw ConfigError("grid needs 1 to 3 spatial axes");
  if (ds.size() != n_space.size())
    throw DimensionMismatch("grid spacing needs one entry per spatial axis");
  for (int n : n_space)
    if (n < 2) throw ConfigError("grid node counts must be at least 2");
  if (nt < 2) throw ConfigError("grid needs at least 2 time nodes");
  for (double h : ds)
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid spacings must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
}

nlohmann::json grid_to_json(const GridSpec& g) {
  nlohmann::json j;
  j["n_space"] = g.n_space;
  j["ds"] = g.ds;
  j["nt"] = g.nt;
  j["dt"] = g.dt;
  j["seed"] = g.seed;
  std::vector<double> extent;
  for (std::size_t i = 0; i < g.ds.size(); ++i) extent.push_back(g.n_space[i] * g.ds[i]);
  j["extent_space"] = extent;
  j["extent_time"] = g.nt * g.dt;
  return j;
}

GridSpec grid_from_json(const nlohmann::json& j) {
  try {
    GridSpec g;
    g.n_space = j.at("n_space").get<std::vector<int>>();
    g.ds = j.at("ds").get<std::vector<double>>();
    g.nt = j.at("nt").get<int>();
    g.dt = j.at("dt").get<double>();
    g.seed = j.value("seed", std::uint64_t{0});
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed grid JSON: ") + e.what());
  }
}

namespace {

// Axis sizes with time first, matching the storage order.
std::vector<int> axis_sizes(const GridSpec& g) {
  std::vector<int> n{g.nt};
  n.insert(n.end(), g.n_space.begin(), g.n_space.end());
  return n;
}

std::vector<double> axis_steps(const GridSpec& g) {
  std::vector<double> h{g.dt};
  h.insert(h.end(), g.ds.begin(), g.ds.end());
  return h;
}

}  // namespace

FieldRealization simulate_field(const KernelModel& m, const GridSpec& g) {
  g.validate();
  if (g.dim() != m.dim())
    throw DimensionMismatch("grid has " + std::to_string(g.dim()) +
                            " spatial axes, model dim is " + std::to_string(m.dim()));
  const std::vector<int> n = axis_sizes(g);
  const std::vector<double> h = axis_steps(g);
  const int axes = static_cast<int>(n.size());
  const std::size_t total = g.size();

  double volume = 1.0;
  for (int a = 0; a < axes; ++a) volume *= n[a] * h[a];

  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw NumericalError("cannot allocate FFT buffer");
  std::memset(buf, 0, sizeof(fftw_complex) * total);

  Philox4x64 rng(g.seed);
  std::vector<int> idx(axes), partner(axes);
  double captured = 0.0;
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    for (int a = axes - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % n[a]);
      rem /= n[a];
    }
    std::size_t plin = 0;
    for (int a = 0; a < axes; ++a) {
      partner[a] = (n[a] - idx[a]) % n[a];
      plin = plin * n[a] + partner[a];
    }
    if (plin < lin) continue;
    double k2 = 0.0;
    double omega = 0.0;
    for (int a = 0; a < axes; ++a) {
      const int signed_idx = idx[a] <= n[a] / 2 ? idx[a] : idx[a] - n[a];
      const double kappa = 2.0 * std::numbers::pi * signed_idx / (n[a] * h[a]);
      if (a == 0)
        omega = kappa;
      else
        k2 += kappa * kappa;
    }
    const double var = st_spectral_density(m, std::sqrt(k2), omega) / volume;
    if (plin == lin) {
      buf[lin][0] = std::sqrt(var) * rng.normal();
      buf[lin][1] = 0.0;
      captured += var;
    } else {
      const double sd = std::sqrt(0.5 * var);
      const double re = sd * rng.normal();
      const double im = sd * rng.normal();
      buf[lin][0] = re;
      buf[lin][1] = im;
      buf[plin][0] = re;
      buf[plin][1] = -im;
      captured += 2.0 * var;
    }
  }

  fftw_plan plan = fftw_plan_dft(axes, n.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  FieldRealization f;
  f.grid = g;
  f.model = model_to_json(m);
  f.rng = Philox4x64::kName;
  f.values.resize(total);
  double sum_sq = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    f.values[i] = buf[i][0];
    sum_sq += buf[i][0] * buf[i][0];
    max_imag = std::max(max_imag, std::abs(buf[i][1]));
  }
  fftw_free(buf);
  const double rms = std::sqrt(sum_sq / total);
  f.imag_to_rms = rms > 0.0 ? max_imag / rms : 0.0;

  if (m.nugget() > 0.0) {
    const double sd = std::sqrt(m.nugget());
    for (double& v : f.values) v += sd * rng.normal();
  }

  const double c00 = kernel_variance(m);
  const double missing = 1.0 - captured / c00;
  if (missing > 0.01) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "SpectralTruncationWarning: the grid captures %.4f of the kernel "
                  "variance; refine the spacing or enlarge the domain",
                  captured / c00);
    f.warnings.emplace_back(msg);
  }
  return f;
}

std::vector<double> empirical_covariance(const FieldRealization& f,
                                         const std::vector<GridLag>& lags,
                                         double mean) {
  const GridSpec& g = f.grid;
  const std::vector<int> n = axis_sizes(g);
  const int axes = static_cast<int>(n.size());
  std::vector<double> out;
  out.reserve(lags.size());
  std::vector<int> off(axes), lo(axes), hi(axes), idx(axes);
  for (const GridLag& lag : lags) {
    if (static_cast<int>(lag.ds.size()) != g.dim())
      throw DimensionMismatch("lag must have one offset per spatial axis");
    off[0] = lag.dt;
    for (int a = 1; a < axes; ++a) off[a] = lag.ds[a - 1];
    std::size_t count = 1;
    for (int a = 0; a < axes; ++a) {
      if (std::abs(off[a]) >= n[a]) throw LagOutOfRange("lag exceeds the grid extent");
      lo[a] = std::max(0, -off[a]);
      hi[a] = n[a] - std::max(0, off[a]);
      count *= static_cast<std::size_t>(hi[a] - lo[a]);
    }
    std::ptrdiff_t shift = 0;
    for (int a = 0; a < axes; ++a) shift = shift * n[a] + off[a];
    double sum = 0.0;
    idx = lo;
    while (true) {
      std::size_t lin = 0;
      for (int a = 0; a < axes; ++a) lin = lin * n[a] + idx[a];
      // innermost axis as a contiguous run
      const int run = hi[axes - 1] - lo[axes - 1];
      const double* z = f.values.data() + lin;
      const double* w = z + shift;
      for (int i = 0; i < run; ++i) sum += (w[i] - mean) * (z[i] - mean);
      int a = axes - 2;
      for (; a >= 0; --a) {
        if (++idx[a] < hi[a]) break;
        idx[a] = lo[a];
      }
      if (a < 0) break;
    }
    out.push_back(sum / static_cast<double>(count));
  }
  return out;
}

void write_field(const FieldRealization& f, const std::string& bin_path,
                 const std::string& json_path) {
  {
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + bin_path + "'");
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(f.values.data()),
                static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    } else {
      for (double v : f.values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(bytes), 8);
      }
    }
  }
  nlohmann::json j;
  j["format"] = "float64-le";
  j["order"] = "C, time slowest";
  std::vector<int> shape = axis_sizes(f.grid);
  j["shape"] = shape;
  j["data_file"] = std::filesystem::path(bin_path).filename().string();
  j["grid"] = grid_to_json(f.grid);
  j["model"] = f.model;
  j["seed"] = f.grid.seed;
  j["rng"] = f.rng;
  j["warnings"] = f.warnings;
  std::ofstream out(json_path);
  if (!out) throw ConfigError("cannot write '" + json_path + "'");
  out << j.dump(2) << "\n";
}

FieldRealization read_field(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ConfigError("cannot open field sidecar '" + json_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + json_path + "': " + e.what());
  }
  FieldRealization f;
  f.grid = grid_from_json(j.at("grid"));
  f.model = j.value("model", nlohmann::json());
  f.rng = j.value("rng", std::string());
  const auto dir = std::filesystem::path(json_path).parent_path();
  const auto bin = dir / j.at("data_file").get<std::string>();
  std::ifstream data(bin, std::ios::binary);
  if (!data) throw ConfigError("cannot open field data '" + bin.string() + "'");
  f.values.resize(f.grid.size());
  std::vector<unsigned char> bytes(f.values.size() * 8);
  data.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (data.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw ConfigError("field data '" + bin.string() + "' is shorter than the grid");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
    f.values[i] = std::bit_cast<double>(bits);
  }
  return f;
}

SpaceTimeDataset field_to_dataset(const FieldRealization& f) {
  const GridSpec& g = f.grid;
  SpaceTimeDataset data;
  const std::size_t per_slice = g.nodes_per_slice();
  data.points.reserve(f.values.size());
  for (std::size_t lin = 0; lin < f.values.size(); ++lin) {
    SpaceTimePoint p;
    p.t = static_cast<double>(lin / per_slice) * g.dt;
    std::size_t rem = lin % per_slice;
    p.s.resize(g.dim());
    for (int a = g.dim() - 1; a >= 0; --a) {
      p.s[a] = static_cast<double>(rem % g.n_space[a]) * g.ds[a];
      rem /= g.n_space[a];
    }
    data.points.push_back(std::move(p));
  }
  data.values = f.values;
  return data;
}

void write_field_csv(const FieldRealization& f, const std::string& path) {
  write_dataset_csv(field_to_dataset(f), path);
}

}  // namespace stk
