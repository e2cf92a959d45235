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
#include "stk/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "stk/errors.hpp"
#include "stk/kernel.hpp"

namespace stk {

std::string to_string(VariogramKind k) {
  switch (k) {
    case VariogramKind::SpatialMarginal:
      return "spatial";
    case VariogramKind::TemporalMarginal:
      return "temporal";
    case VariogramKind::SpaceTime:
      return "spacetime";
  }
  return "unknown";
}

VariogramKind variogram_kind_from_string(const std::string& s) {
  if (s == "spatial") return VariogramKind::SpatialMarginal;
  if (s == "temporal") return VariogramKind::TemporalMarginal;
  if (s == "spacetime") return VariogramKind::SpaceTime;
  throw ConfigError("unknown variogram kind '" + s + "' (spatial|temporal|spacetime)");
}

LagBins LagBins::regular(double step, int count, int first, double tolerance,
                         int stride) {
  if (!(step > 0.0) || count < 1 || stride < 1) throw ConfigError("bad lag bins");
  LagBins b;
  for (int i = 0; i < count; ++i) b.centers.push_back((first + i * stride) * step);
  b.tolerance = tolerance >= 0.0 ? tolerance : 0.5 * step;
  return b;
}

int LagBins::locate(double x) const {
  auto it = std::lower_bound(centers.begin(), centers.end(), x);
  int best = -1;
  double gap = tolerance;
  for (auto c : {it, it == centers.begin() ? it : it - 1}) {
    if (c == centers.end()) continue;
    const double g = std::abs(*c - x);
    if (g <= gap) {
      gap = g;
      best = static_cast<int>(c - centers.begin());
    }
  }
  return best;
}

namespace {

struct Accum {
  double sum_sq = 0.0;
  double sum_r = 0.0;
  double sum_tau = 0.0;
  std::size_t n = 0;
};

// Sum of squared increments z(x + off) - z(x) over all in-grid x, with the
// time axis first in `off`.
Accum grid_increments(const FieldRealization& f, const std::vector<int>& off) {
  const GridSpec& g = f.grid;
  std::vector<int> n{g.nt};
  n.insert(n.end(), g.n_space.begin(), g.n_space.end());
  const int axes = static_cast<int>(n.size());
  std::vector<int> lo(axes), hi(axes), idx(axes);
  Accum acc;
  std::size_t count = 1;
  for (int a = 0; a < axes; ++a) {
    if (std::abs(off[a]) >= n[a]) return acc;
    lo[a] = std::max(0, -off[a]);
    hi[a] = n[a] - std::max(0, off[a]);
    count *= static_cast<std::size_t>(hi[a] - lo[a]);
  }
  std::ptrdiff_t shift = 0;
  for (int a = 0; a < axes; ++a) shift = shift * n[a] + off[a];
  idx = lo;
  const int run = hi[axes - 1] - lo[axes - 1];
  while (true) {
    std::size_t lin = 0;
    for (int a = 0; a < axes; ++a) lin = lin * n[a] + idx[a];
    const double* z = f.values.data() + lin;
    const double* w = z + shift;
    double s = 0.0;
    for (int i = 0; i < run; ++i) {
      const double d = w[i] - z[i];
      s += d * d;
    }
    acc.sum_sq += s;
    int a = axes - 2;
    for (; a >= 0; --a) {
      if (++idx[a] < hi[a]) break;
      idx[a] = lo[a];
    }
    if (a < 0) break;
  }
  acc.n = count;
  return acc;
}

// Integer spatial offsets with |offset * ds| <= rmax. With half = true only
// one of each +/- pair is kept (first non-zero component positive).
std::vector<std::vector<int>> spatial_offsets(const GridSpec& g, double rmax,
                                              bool half, bool include_zero) {
  const int d = g.dim();
  std::vector<int> reach(d);
  for (int a = 0; a < d; ++a)
    reach[a] = std::min(g.n_space[a] - 1, static_cast<int>(std::floor(rmax / g.ds[a])));
  std::vector<std::vector<int>> out;
  std::vector<int> v(d);
  for (int a = 0; a < d; ++a) v[a] = -reach[a];
  while (true) {
    double r2 = 0.0;
    int first = 0;
    for (int a = 0; a < d; ++a) {
      r2 += (v[a] * g.ds[a]) * (v[a] * g.ds[a]);
      if (first == 0) first = v[a];
    }
    const bool zero = first == 0;
    if (r2 <= rmax * rmax * (1.0 + 1e-12) && (!zero || include_zero) &&
        (!half || zero || first > 0))
      out.push_back(v);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++v[a] <= reach[a]) break;
      v[a] = -reach[a];
    }
    if (a < 0) break;
  }
  return out;
}

double norm_of(const std::vector<int>& v, const GridSpec& g) {
  double r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) r2 += (v[a] * g.ds[a]) * (v[a] * g.ds[a]);
  return std::sqrt(r2);
}

// Runs `job(i)` for i in [0, count) over a few threads; each result lands in
// its own slot so the reduction order stays fixed.
template <class Job>
std::vector<Accum> parallel_accumulate(std::size_t count, int threads, Job job) {
  std::vector<Accum> out(count);
  unsigned nt = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, std::max<std::size_t>(1, count));
  if (nt <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += nt) out[i] = job(i);
    });
  return out;
}

EmpiricalVariogram finish(VariogramKind kind, const std::vector<Accum>& cells,
                          const std::vector<std::pair<int, int>>& keys,
                          double tol, double tau_tol) {
  EmpiricalVariogram v;
  v.kind = kind;
  v.tolerance = tol;
  v.tau_tolerance = tau_tol;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Accum& a = cells[i];
    if (a.n == 0) {
      v.warnings.push_back("EmptyBin: bin (" + std::to_string(keys[i].first) + "," +
                           std::to_string(keys[i].second) + ") has no pairs and was dropped");
      continue;
    }
    VariogramBin b;
    b.gamma = a.sum_sq / (2.0 * a.n);
    b.r = a.sum_r / a.n;
    b.tau = a.sum_tau / a.n;
    b.n = a.n;
    v.bins.push_back(b);
  }
  return v;
}

void add(Accum& into, const Accum& part, double r, double tau) {
  into.sum_sq += part.sum_sq;
  into.sum_r += r * part.n;
  into.sum_tau += tau * part.n;
  into.n += part.n;
}

}  // namespace

EmpiricalVariogram spatial_marginal_variogram(const FieldRealization& f,
                                              const LagBins& bins, int threads) {
  const GridSpec& g = f.grid;
  if (bins.centers.empty()) throw ConfigError("no spatial lag bins");
  const auto offs = spatial_offsets(g, bins.centers.back() + bins.tolerance, true, false);
  auto parts = parallel_accumulate(offs.size(), threads, [&](std::size_t i) {
    std::vector<int> off{0};
    off.insert(off.end(), offs[i].begin(), offs[i].end());
    return grid_increments(f, off);
  });
  std::vector<Accum> cells(bins.centers.size());
  for (std::size_t i = 0; i < offs.size(); ++i) {
    const double r = norm_of(offs[i], g);
    const int b = bins.locate(r);
    if (b >= 0) add(cells[b], parts[i], r, 0.0);
  }
  std::vector<std::pair<int, int>> keys;
  for (std::size_t i = 0; i < cells.size(); ++i) keys.emplace_back(static_cast<int>(i), 0);
  return finish(VariogramKind::SpatialMarginal, cells, keys, bins.tolerance, 0.0);
}

EmpiricalVariogram temporal_marginal_variogram(const FieldRealization& f,
                                               const LagBins& bins) {
  const GridSpec& g = f.grid;
  std::vector<Accum> cells(bins.centers.size());
  for (int m = 1; m < g.nt; ++m) {
    const double tau = m * g.dt;
    const int b = bins.locate(tau);
    if (b < 0) continue;
    std::vector<int> off(g.dim() + 1, 0);
    off[0] = m;
    add(cells[b], grid_increments(f, off), 0.0, tau);
  }
  std::vector<std::pair<int, int>> keys;
  for (std::size_t i = 0; i < cells.size(); ++i) keys.emplace_back(0, static_cast<int>(i));
  return finish(VariogramKind::TemporalMarginal, cells, keys, 0.0, bins.tolerance);
}

EmpiricalVariogram space_time_variogram(const FieldRealization& f,
                                        const LagBins& r_bins,
                                        const LagBins& tau_bins, int threads) {
  const GridSpec& g = f.grid;
  if (r_bins.centers.empty() || tau_bins.centers.empty())
    throw ConfigError("space-time variogram needs spatial and temporal bins");
  const double rmax = r_bins.centers.back() + r_bins.tolerance;
  const auto half = spatial_offsets(g, rmax, true, false);
  const auto full = spatial_offsets(g, rmax, false, true);
  struct Task {
    std::vector<int> off;
    int cell;
    double r, tau;
  };
  std::vector<Task> tasks;
  const std::size_t nr = r_bins.centers.size();
  for (int m = 0; m < g.nt; ++m) {
    const double tau = m * g.dt;
    const int tb = tau_bins.locate(tau);
    if (tb < 0) continue;
    for (const auto& s : (m == 0 ? half : full)) {
      const double r = norm_of(s, g);
      const int rb = r_bins.locate(r);
      if (rb < 0) continue;
      std::vector<int> off{m};
      off.insert(off.end(), s.begin(), s.end());
      tasks.push_back({off, static_cast<int>(tb * nr + rb), r, tau});
    }
  }
  auto parts = parallel_accumulate(tasks.size(), threads,
                                   [&](std::size_t i) { return grid_increments(f, tasks[i].off); });
  std::vector<Accum> cells(nr * tau_bins.centers.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    add(cells[tasks[i].cell], parts[i], tasks[i].r, tasks[i].tau);
  std::vector<Accum> kept;
  std::vector<std::pair<int, int>> keys;
  for (std::size_t tb = 0; tb < tau_bins.centers.size(); ++tb)
    for (std::size_t rb = 0; rb < nr; ++rb) {
      if (r_bins.locate(0.0) == static_cast<int>(rb) &&
          tau_bins.locate(0.0) == static_cast<int>(tb))
        continue;
      kept.push_back(cells[tb * nr + rb]);
      keys.emplace_back(static_cast<int>(rb), static_cast<int>(tb));
    }
  return finish(VariogramKind::SpaceTime, kept, keys, r_bins.tolerance,
                tau_bins.tolerance);
}

namespace {

double distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.s.size(); ++i) s += (a.s[i] - b.s[i]) * (a.s[i] - b.s[i]);
  return std::sqrt(s);
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

template <class Classify>
EmpiricalVariogram scattered(const SpaceTimeDataset& data, VariogramKind kind,
                             std::size_t cells_count, Classify classify,
                             double tol, double tau_tol) {
  data.validate();
  std::vector<Accum> cells(cells_count);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      const double r = distance(data.points[i], data.points[j]);
      const double tau = std::abs(data.points[i].t - data.points[j].t);
      const int c = classify(r, tau, data.points[i].t, data.points[j].t);
      if (c < 0) continue;
      const double dz = data.values[i] - data.values[j];
      Accum& a = cells[c];
      a.sum_sq += dz * dz;
      a.sum_r += r;
      a.sum_tau += tau;
      ++a.n;
    }
  std::vector<std::pair<int, int>> keys;
  for (std::size_t i = 0; i < cells_count; ++i) keys.emplace_back(static_cast<int>(i), 0);
  return finish(kind, cells, keys, tol, tau_tol);
}

}  // namespace

EmpiricalVariogram spatial_marginal_variogram(const SpaceTimeDataset& data,
                                              const LagBins& bins) {
  return scattered(
      data, VariogramKind::SpatialMarginal, bins.centers.size(),
      [&](double r, double, double ti, double tj) {
        return same_time(ti, tj) && r > 0.0 ? bins.locate(r) : -1;
      },
      bins.tolerance, 0.0);
}

EmpiricalVariogram temporal_marginal_variogram(const SpaceTimeDataset& data,
                                               const LagBins& bins) {
  return scattered(
      data, VariogramKind::TemporalMarginal, bins.centers.size(),
      [&](double r, double tau, double, double) {
        return r <= 1e-9 && tau > 0.0 ? bins.locate(tau) : -1;
      },
      0.0, bins.tolerance);
}

EmpiricalVariogram space_time_variogram(const SpaceTimeDataset& data,
                                        const LagBins& r_bins,
                                        const LagBins& tau_bins) {
  const std::size_t nr = r_bins.centers.size();
  const int r0 = r_bins.locate(0.0);
  const int t0 = tau_bins.locate(0.0);
  EmpiricalVariogram v = scattered(
      data, VariogramKind::SpaceTime, nr * tau_bins.centers.size(),
      [&](double r, double tau, double, double) {
        const int rb = r_bins.locate(r);
        const int tb = tau_bins.locate(tau);
        if (rb < 0 || tb < 0 || (rb == r0 && tb == t0)) return -1;
        return static_cast<int>(tb * nr + rb);
      },
      r_bins.tolerance, tau_bins.tolerance);
  return v;
}

double default_lag_tolerance(const SpaceTimeDataset& data) {
  data.validate();
  std::vector<std::vector<double>> sites;
  for (const auto& p : data.points) {
    bool seen = false;
    for (const auto& s : sites) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) d2 += (s[i] - p.s[i]) * (s[i] - p.s[i]);
      if (d2 <= 1e-18) {
        seen = true;
        break;
      }
    }
    if (!seen) sites.push_back(p.s);
  }
  if (sites.size() < 2) throw ConfigError("need at least two distinct locations");
  std::vector<double> nn(sites.size(), INFINITY);
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (i == j) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < sites[i].size(); ++a)
        d2 += (sites[i][a] - sites[j][a]) * (sites[i][a] - sites[j][a]);
      nn[i] = std::min(nn[i], std::sqrt(d2));
    }
  std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
  return 0.5 * nn[nn.size() / 2];
}

double model_variogram(const KernelModel& m, double r, double tau) {
  if (r == 0.0 && tau == 0.0) return 0.0;
  return kernel_variance(m) - m(r, tau) + m.nugget();
}

WlsValue wls_objective(const KernelModel& m, const EmpiricalVariogram& v) {
  WlsValue out;
  const double floor = 1e-12 * (kernel_variance(m) + m.nugget());
  for (const auto& b : v.bins) {
    double r = b.r, tau = b.tau;
    if (v.kind == VariogramKind::SpatialMarginal) tau = 0.0;
    if (v.kind == VariogramKind::TemporalMarginal) r = 0.0;
    const double g = model_variogram(m, r, tau);
    if (!(g > floor)) {
      ++out.skipped;
      continue;
    }
    const double e = b.gamma / g - 1.0;
    out.value += static_cast<double>(b.n) * e * e;
    ++out.used;
  }
  if (out.used == 0) throw AllBinsSkipped("every variogram bin has a vanishing model value");
  return out;
}

nlohmann::json variogram_to_json(const EmpiricalVariogram& v) {
  nlohmann::json j;
  j["kind"] = to_string(v.kind);
  j["tolerance"] = v.tolerance;
  j["tau_tolerance"] = v.tau_tolerance;
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : v.bins) {
    nlohmann::json e;
    if (v.kind != VariogramKind::TemporalMarginal) e["r"] = b.r;
    if (v.kind != VariogramKind::SpatialMarginal) e["tau"] = b.tau;
    e["gamma"] = b.gamma;
    e["n"] = b.n;
    bins.push_back(e);
  }
  j["bins"] = bins;
  if (!v.warnings.empty()) j["warnings"] = v.warnings;
  return j;
}

EmpiricalVariogram variogram_from_json(const nlohmann::json& j) {
  try {
    EmpiricalVariogram v;
    v.kind = variogram_kind_from_string(j.at("kind").get<std::string>());
    v.tolerance = j.value("tolerance", 0.0);
    v.tau_tolerance = j.value("tau_tolerance", 0.0);
    for (const auto& e : j.at("bins")) {
      VariogramBin b;
      b.r = e.value("r", 0.0);
      b.tau = e.value("tau", 0.0);
      b.gamma = e.at("gamma").get<double>();
      b.n = e.at("n").get<std::size_t>();
      v.bins.push_back(b);
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed variogram JSON: ") + e.what());
  }
}

}  // namespace stk
