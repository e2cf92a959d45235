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
#include "stk/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stk/errors.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"

namespace stk {

std::string to_string(Family f) { return f == Family::Ldho ? "ldho" : "ou"; }

Family family_from_string(const std::string& s) {
  if (s == "ldho") return Family::Ldho;
  if (s == "ou") return Family::Ou;
  throw ConfigError("unknown family '" + s + "' (expected ldho|ou)");
}

VariogramSet compute_variograms(const FieldRealization& f,
                                const VariogramConfig& cfg, int threads) {
  const GridSpec& g = f.grid;
  const double step = *std::min_element(g.ds.begin(), g.ds.end());
  const double tol = cfg.lag_tolerance >= 0.0 ? cfg.lag_tolerance : 0.5 * step;
  VariogramSet v;
  v.dim = g.dim();
  v.spatial = spatial_marginal_variogram(
      f, LagBins::regular(step, cfg.spatial_bins, 1, tol), threads);
  v.temporal = temporal_marginal_variogram(
      f, LagBins::regular(g.dt, std::min(cfg.temporal_bins, g.nt - 1), 1, 0.25 * g.dt));
  v.spacetime = space_time_variogram(
      f, LagBins::regular(step, cfg.st_spatial_bins, 0, tol),
      LagBins::regular(g.dt, cfg.st_temporal_bins, 0, 0.25 * g.dt, cfg.st_temporal_stride),
      threads);
  return v;
}

VariogramSet compute_variograms(const SpaceTimeDataset& data,
                                const VariogramConfig& cfg) {
  data.validate();
  const double tol = cfg.lag_tolerance >= 0.0 ? cfg.lag_tolerance
                                              : default_lag_tolerance(data);
  std::vector<double> times;
  for (const auto& p : data.points) times.push_back(p.t);
  std::sort(times.begin(), times.end());
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] - times[i - 1] > 1e-9 * std::max(1.0, std::abs(times[i])))
      dt = std::min(dt, times[i] - times[i - 1]);
  if (!std::isfinite(dt)) throw ConfigError("dataset needs at least two distinct times");
  const double step = 2.0 * tol;
  VariogramSet v;
  v.dim = data.dim();
  v.spatial = spatial_marginal_variogram(data, LagBins::regular(step, cfg.spatial_bins, 1, tol));
  v.temporal = temporal_marginal_variogram(
      data, LagBins::regular(dt, cfg.temporal_bins, 1, 0.25 * dt));
  v.spacetime = space_time_variogram(
      data, LagBins::regular(step, cfg.st_spatial_bins, 0, tol),
      LagBins::regular(dt, cfg.st_temporal_bins, 0, 0.25 * dt, cfg.st_temporal_stride));
  return v;
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBad = 1e300;

using Theta = std::map<std::string, double>;

struct Shape {
  Family family;
  Dispersion dispersion;
  int dim;
  Regime regime;
};

KernelModel build(const Shape& s, const Theta& th) {
  const double c1 = th.at("c1");
  const double nugget = th.at("nugget");
  if (s.family == Family::Ou) {
    OuParams unit(1.0, 1.0, th.at("a"), th.at("scale"), th.at("beta"), s.dispersion, s.dim);
    const double var = ou_kernel(unit, 0.0, 0.0);
    unit.sigma0_sq = c1 / var;
    return KernelModel(unit, nugget);
  }
  const double tc = th.at("tau_c");
  double wd = 0.0;
  if (s.regime == Regime::Underdamped) wd = th.at("omega_d");
  if (s.regime == Regime::Overdamped) wd = th.at("s") / (2.0 * tc);
  const LdhoParams unit = LdhoParams::from_damped(1.0, tc, wd, s.regime, th.at("epsilon"),
                                                  th.at("b_or_xi"), s.dispersion, s.dim);
  return KernelModel(unit.with_c0(1.0 / ldho_kernel(unit, 0.0, 0.0) * c1), nugget);
}

std::vector<std::string> free_names(const Shape& s) {
  if (s.family == Family::Ou) return {"c1", "beta", "a", "scale", "nugget"};
  switch (s.regime) {
    case Regime::Underdamped:
      return {"c1", "epsilon", "omega_d", "tau_c", "b_or_xi", "nugget"};
    case Regime::Overdamped:
      return {"c1", "epsilon", "s", "tau_c", "b_or_xi", "nugget"};
    case Regime::Critical:
      return {"c1", "epsilon", "tau_c", "b_or_xi", "nugget"};
  }
  return {};
}

struct Scales {
  double sill, rmin, rmax, tmin, tmax;
};

Scales scales_of(const VariogramSet& v) {
  if (v.spatial.bins.size() < 2 || v.temporal.bins.size() < 2)
    throw NumericalError("marginal variograms need at least two non-empty bins each");
  Scales s;
  const auto& sb = v.spatial.bins;
  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = sb.size() - std::max<std::size_t>(1, sb.size() / 3); i < sb.size(); ++i) {
    acc += sb[i].gamma;
    ++cnt;
  }
  s.sill = std::max(acc / cnt, 1e-300);
  s.rmin = sb.front().r;
  s.rmax = sb.back().r;
  s.tmin = v.temporal.bins.front().tau;
  s.tmax = v.temporal.bins.back().tau;
  return s;
}

std::pair<double, double> bound_for(const std::string& name, const Scales& sc,
                                    Dispersion disp, const FitBounds& user) {
  if (auto it = user.box.find(name); it != user.box.end()) {
    if (!(it->second.first > 0.0) || !(it->second.second >= it->second.first))
      throw ConfigError("bounds for '" + name + "' must satisfy 0 < lo <= hi");
    return it->second;
  }
  const bool quad = disp == Dispersion::Quadratic;
  const double len_lo = quad ? sc.rmin * sc.rmin : sc.rmin;
  const double len_hi = quad ? sc.rmax * sc.rmax : sc.rmax;
  if (name == "c1") return {1e-3 * sc.sill, 1e3 * sc.sill};
  if (name == "epsilon" || name == "beta") return {1e-3 * len_lo, 1e3 * len_hi};
  if (name == "b_or_xi" || name == "scale") return {1e-8 * len_hi, 1e3 * len_hi};
  if (name == "omega_d") return {1e-3 / sc.tmax, 10.0 * kPi / sc.tmin};
  if (name == "s") return {1e-6, 1.0 - 1e-6};
  if (name == "tau_c") return {1e-2 * sc.tmin, 1e3 * sc.tmax};
  if (name == "a") return {1e-3 / sc.tmax, 1e2 / sc.tmin};
  if (name == "nugget") return {1e-8 * sc.sill, 2.0 * sc.sill};
  throw ConfigError("unknown hyperparameter '" + name + "'");
}

struct StageOutcome {
  Theta theta;
  double f;
  int iterations;
  int evals;
  bool converged;
  std::vector<double> trace;
};

template <class Objective>
StageOutcome optimize(const Shape& shape, Theta start, const std::vector<std::string>& names,
                      const Scales& sc, const FitBounds& user, Objective objective,
                      const NelderMeadOptions& opt) {
  std::vector<std::pair<double, double>> box;
  for (const auto& n : names) {
    auto b = bound_for(n, sc, shape.dispersion, user);
    box.emplace_back(std::log(b.first), std::log(b.second));
  }
  auto to_theta = [&](const std::vector<double>& x) {
    Theta th = start;
    for (std::size_t i = 0; i < names.size(); ++i)
      th[names[i]] = std::exp(std::clamp(x[i], box[i].first, box[i].second));
    return th;
  };
  auto f = [&](const std::vector<double>& x) {
    try {
      const double v = objective(build(shape, to_theta(x)));
      return std::isfinite(v) ? v : kBad;
    } catch (const Error&) {
      return kBad;
    }
  };
  std::vector<double> x0;
  for (std::size_t i = 0; i < names.size(); ++i)
    x0.push_back(std::clamp(std::log(start.at(names[i])), box[i].first, box[i].second));
  const NelderMeadResult r = nelder_mead(f, x0, opt);
  return {to_theta(r.x), r.f, r.iterations, r.evals, r.converged, r.trace};
}

double safe(const std::function<double()>& g) {
  try {
    const double v = g();
    return std::isfinite(v) ? v : kBad;
  } catch (const Error&) {
    return kBad;
  }
}

Theta theta_map(const KernelModel& m, Shape& shape) {
  Theta th;
  th["c1"] = kernel_variance(m);
  th["nugget"] = m.nugget();
  if (const auto* p = std::get_if<LdhoParams>(&m.kernel())) {
    shape = {Family::Ldho, p->dispersion(), p->dim(), classify_regime(*p)};
    th["epsilon"] = p->epsilon();
    th["tau_c"] = p->tau_c();
    th["b_or_xi"] = p->interaction();
    if (shape.regime == Regime::Underdamped) th["omega_d"] = p->omega_d();
    if (shape.regime == Regime::Overdamped) th["s"] = 2.0 * p->tau_c() * p->omega_d();
    return th;
  }
  if (const auto* p = std::get_if<OuParams>(&m.kernel())) {
    shape = {Family::Ou, p->dispersion, p->dim, Regime::Critical};
    th["beta"] = p->beta;
    th["a"] = p->a / p->tau_c;
    th["scale"] = p->scale / p->tau_c;
    return th;
  }
  throw ConfigError("cannot fit a separable surrogate");
}

double wls(const KernelModel& m, const EmpiricalVariogram& v) {
  return wls_objective(m, v).value;
}

// Lag where the normalized decay first crosses 1/e, by linear interpolation.
double efold_lag(const std::vector<double>& lag, const std::vector<double>& frac,
                 double fallback) {
  const double target = std::exp(-1.0);
  double prev_l = 0.0, prev_f = 1.0;
  for (std::size_t i = 0; i < lag.size(); ++i) {
    if (frac[i] <= target) {
      const double w = (prev_f - target) / std::max(prev_f - frac[i], 1e-300);
      return prev_l + w * (lag[i] - prev_l);
    }
    prev_l = lag[i];
    prev_f = frac[i];
  }
  return fallback;
}

}  // namespace

std::vector<std::string> theta_names(Family f) {
  if (f == Family::Ou) return {"c1", "beta", "a", "scale", "nugget"};
  return {"c1", "epsilon", "omega_d", "tau_c", "b_or_xi", "nugget"};
}

std::vector<double> theta_of(const KernelModel& m) {
  Shape shape{};
  Theta th = theta_map(m, shape);
  if (shape.family == Family::Ou)
    return {th["c1"], th["beta"], th["a"], th["scale"], th["nugget"]};
  const auto& p = std::get<LdhoParams>(m.kernel());
  return {th["c1"], th["epsilon"], damped_frequency(p), th["tau_c"], th["b_or_xi"], th["nugget"]};
}

double joint_objective(const KernelModel& m, const VariogramSet& v) {
  return wls(m, v.spacetime);
}

FitResult fit_marginals(const VariogramSet& v, Family family, Dispersion dispersion,
                        const FitBounds& bounds, const NelderMeadOptions& opt) {
  const Scales sc = scales_of(v);
  const int d = v.dim;
  const bool quad = dispersion == Dispersion::Quadratic;
  const std::string len_name = family == Family::Ldho ? "epsilon" : "beta";

  // Stage 1: spatial marginal -> (c1, length, nugget_S).
  const auto& sb = v.spatial.bins;
  double nug0 = sb[0].gamma - (sb[1].gamma - sb[0].gamma) * sb[0].r / (sb[1].r - sb[0].r);
  nug0 = std::clamp(nug0, 0.01 * sc.sill, 0.5 * sc.sill);
  const double c1_0 = sc.sill - nug0;
  std::vector<double> lag, frac;
  for (const auto& b : sb) {
    lag.push_back(b.r);
    frac.push_back(1.0 - (b.gamma - nug0) / c1_0);
  }
  const double r_e = efold_lag(lag, frac, sc.rmax);
  const double len0 = quad ? r_e * r_e / 4.0
                           : r_e / std::sqrt(std::exp(2.0 / (d + 1)) - 1.0);

  Theta base;
  Shape shape{family, dispersion, d, Regime::Underdamped};
  if (family == Family::Ldho) {
    base = {{"c1", c1_0}, {"epsilon", len0}, {"omega_d", 1.0}, {"tau_c", 1.0},
            {"b_or_xi", quad ? 0.1 * len0 : 0.1 * len0}, {"nugget", nug0}};
  } else {
    base = {{"c1", c1_0}, {"beta", len0}, {"a", 1.0}, {"scale", 0.1 * len0}, {"nugget", nug0}};
  }
  const std::vector<std::string> spatial_names{"c1", len_name, "nugget"};
  auto spatial_obj = [&](const KernelModel& m) { return wls(m, v.spatial); };
  auto temporal_obj = [&](const KernelModel& m) { return wls(m, v.temporal); };

  FitResult res(build(shape, base));
  res.converged = true;
  auto absorb = [&res](const StageOutcome& o) {
    res.iterations += o.iterations;
    res.evaluations += o.evals;
    res.converged = res.converged && o.converged;
  };

  StageOutcome best_s{};
  best_s.f = kBad;
  for (double mult : {0.5, 1.0, 2.0}) {
    Theta start = base;
    start[len_name] = len0 * mult;
    StageOutcome o = optimize(shape, start, spatial_names, sc, bounds, spatial_obj, opt);
    absorb(o);
    if (o.f < best_s.f) best_s = o;
  }
  res.trace.push_back(best_s.f);
  const Theta after_spatial = best_s.theta;
  const double nug_s = after_spatial.at("nugget");

  // Stage 2: temporal marginal with c1 and the length scale held fixed.
  const auto& tb = v.temporal.bins;
  const double sill_t = after_spatial.at("c1") + nug_s;
  std::vector<double> tlag, tfrac, cov;
  for (const auto& b : tb) {
    tlag.push_back(b.tau);
    cov.push_back(sill_t - b.gamma);
    tfrac.push_back((sill_t - b.gamma) / after_spatial.at("c1"));
  }
  const double tau_e = efold_lag(tlag, tfrac, sc.tmax);
  double wd0 = -1.0;
  for (std::size_t i = 1; i + 1 < cov.size(); ++i)
    if (cov[i] < 0.0 && cov[i] < cov[i - 1] && cov[i] <= cov[i + 1]) {
      wd0 = kPi / tlag[i];
      break;
    }
  if (wd0 < 0.0)
    for (std::size_t i = 1; i < cov.size(); ++i)
      if (cov[i] < 0.0) {
        const double w = cov[i - 1] / (cov[i - 1] - cov[i]);
        wd0 = kPi / (2.0 * (tlag[i - 1] + w * (tlag[i] - tlag[i - 1])));
        break;
      }

  Theta best_theta;
  double best_f = kBad;
  Shape best_shape = shape;
  Theta init_theta;  // heuristic starting point reported as theta0
  double init_f = kBad;
  auto try_start = [&](const Shape& sh, Theta start, const std::vector<std::string>& names) {
    const double f0 = safe([&] { return temporal_obj(build(sh, start)); });
    if (init_theta.empty() || f0 < init_f) {
      init_theta = start;
      init_f = f0;
    }
    StageOutcome o = optimize(sh, start, names, sc, bounds, temporal_obj, opt);
    absorb(o);
    if (o.f < best_f) {
      best_f = o.f;
      best_theta = o.theta;
      best_shape = sh;
    }
  };

  if (family == Family::Ldho) {
    const double len = after_spatial.at("epsilon");
    for (double bmult : {0.1, 1.0}) {
      if (wd0 > 0.0) {
        Shape sh = shape;
        sh.regime = Regime::Underdamped;
        for (double tmult : {1.0, 3.0, 10.0}) {
          Theta st = after_spatial;
          st["omega_d"] = wd0;
          st["tau_c"] = tmult * tau_e;
          st["b_or_xi"] = bmult * len;
          try_start(sh, st, {"omega_d", "tau_c", "b_or_xi", "nugget"});
        }
      }
      for (double s : {0.3, 0.8}) {
        Shape sh = shape;
        sh.regime = Regime::Overdamped;
        for (double tmult : {1.0, 3.0}) {
          Theta st = after_spatial;
          st.erase("omega_d");
          st["s"] = s;
          st["tau_c"] = tmult * tau_e * (1.0 - s) / 2.0;
          st["b_or_xi"] = bmult * len;
          try_start(sh, st, {"s", "tau_c", "b_or_xi", "nugget"});
        }
      }
      {
        Shape sh = shape;
        sh.regime = Regime::Critical;
        for (double tmult : {0.3, 1.0}) {
          Theta st = after_spatial;
          st.erase("omega_d");
          st["tau_c"] = tmult * tau_e;
          st["b_or_xi"] = bmult * len;
          try_start(sh, st, {"tau_c", "b_or_xi", "nugget"});
        }
      }
    }
  } else {
    const double len = after_spatial.at("beta");
    for (double bmult : {0.1, 1.0})
      for (double amult : {1.0, 3.0}) {
        Theta st = after_spatial;
        st["a"] = amult / tau_e;
        st["scale"] = bmult * len;
        try_start(shape, st, {"a", "scale", "nugget"});
      }
  }
  if (best_f >= kBad) throw NumericalError("temporal marginal fit failed for every start");
  res.trace.push_back(best_f);

  Theta final_theta = best_theta;
  final_theta["nugget"] = std::min(nug_s, best_theta.at("nugget"));
  Theta start_theta = init_theta;
  start_theta["c1"] = base.at("c1");
  start_theta[len_name] = base.at(len_name);
  start_theta["nugget"] = base.at("nugget");

  auto marginal_sum = [&](const KernelModel& m) {
    return safe([&] { return wls(m, v.spatial) + wls(m, v.temporal); });
  };
  Shape start_shape = best_shape;
  {
    // The reported starting point uses the regime of the start that scored best.
    if (start_theta.count("omega_d") && !start_theta.count("s"))
      start_shape.regime = Regime::Underdamped;
    else if (start_theta.count("s"))
      start_shape.regime = Regime::Overdamped;
    else
      start_shape.regime = Regime::Critical;
    if (family == Family::Ou) start_shape.regime = Regime::Critical;
  }
  if (family == Family::Ldho && start_shape.regime != Regime::Underdamped)
    start_theta.erase("omega_d");
  const KernelModel start_model = build(start_shape, start_theta);
  KernelModel final_model = build(best_shape, final_theta);
  res.objective_theta0 = marginal_sum(start_model);
  res.objective = marginal_sum(final_model);
  if (res.objective > res.objective_theta0) {
    final_model = start_model;
    res.objective = res.objective_theta0;
  }
  res.model = final_model;
  res.regime = family == Family::Ldho
                   ? to_string(classify_regime(std::get<LdhoParams>(final_model.kernel())))
                   : "";
  res.names = theta_names(family);
  res.theta0 = theta_of(start_model);
  res.theta_star = theta_of(final_model);
  res.trace.push_back(res.objective);
  return res;
}

FitResult fit_full(const VariogramSet& v, const KernelModel& theta0,
                   const FitBounds& bounds, const NelderMeadOptions& opt) {
  const Scales sc = scales_of(v);
  Shape shape{};
  const Theta start = theta_map(theta0, shape);
  const KernelModel start_model = build(shape, start);
  auto obj = [&](const KernelModel& m) { return wls(m, v.spacetime); };
  const double f0 = obj(start_model);
  StageOutcome o = optimize(shape, start, free_names(shape), sc, bounds, obj, opt);
  FitResult res(start_model);
  res.objective_theta0 = f0;
  res.iterations = o.iterations;
  res.evaluations = o.evals;
  res.converged = o.converged;
  res.trace = o.trace;
  res.trace.insert(res.trace.begin(), f0);
  if (o.f < f0) {
    res.model = build(shape, o.theta);
    res.objective = o.f;
  } else {
    res.objective = f0;
  }
  res.regime = shape.family == Family::Ldho ? to_string(shape.regime) : "";
  res.names = theta_names(shape.family);
  res.theta0 = theta_of(start_model);
  res.theta_star = theta_of(res.model);
  return res;
}

nlohmann::json fit_to_json(const FitResult& r) {
  nlohmann::json j;
  j["model"] = model_to_json(r.model);
  j["objective"] = r.objective;
  j["objective_theta0"] = r.objective_theta0;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["converged"] = r.converged;
  if (!r.regime.empty()) j["regime"] = r.regime;
  j["names"] = r.names;
  j["theta0"] = r.theta0;
  j["theta_star"] = r.theta_star;
  j["trace"] = r.trace;
  return j;
}

FitBounds bounds_from_json(const nlohmann::json& j) {
  FitBounds b;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto pair = it.value().get<std::vector<double>>();
      if (pair.size() != 2) throw ConfigError("bounds for '" + it.key() + "' need [lo, hi]");
      b.box[it.key()] = {pair[0], pair[1]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed bounds JSON: ") + e.what());
  }
  return b;
}

}  // namespace stk
