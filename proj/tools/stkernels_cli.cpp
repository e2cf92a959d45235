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
// Command-line front end: eval, simulate, variogram, fit, predict, checks.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stk/checks.hpp"
#include "stk/errors.hpp"
#include "stk/fit.hpp"
#include "stk/gp.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/presets.hpp"
#include "stk/simulate.hpp"
#include "stk/variogram.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheck = 3;

struct Globals {
  std::string model_path;
  std::string figure;
  std::string out = ".";
  std::uint64_t seed = 0;
  int threads = 0;
};

stk::KernelModel resolve_model(const Globals& g) {
  if (!g.model_path.empty() && !g.figure.empty())
    throw stk::ConfigError("use either --model or --figure, not both");
  if (!g.figure.empty()) return stk::preset_model(g.figure);
  if (g.model_path.empty()) throw stk::ConfigError("a model is required (--model or --figure)");
  return stk::load_model(g.model_path);
}

fs::path out_dir(const Globals& g) {
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw stk::ConfigError("cannot create output directory " + g.out);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw stk::ConfigError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> linspace(double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) v[i] = hi * i / (n - 1);
  return v;
}

// ---- eval ----------------------------------------------------------------

struct EvalOpts {
  double r_max = 3.0;
  double tau_max = 3.0;
  int nr = 61;
  int ntau = 61;
};

int cmd_eval(const Globals& g, const EvalOpts& o) {
  if (o.nr < 1 || o.ntau < 1) throw stk::ConfigError("--nr and --ntau must be >= 1");
  if (!(o.r_max >= 0.0) || !(o.tau_max >= 0.0))
    throw stk::ConfigError("--r-max and --tau-max must be >= 0");
  const stk::KernelModel m = resolve_model(g);
  const double c00 = stk::kernel_variance(m);
  const fs::path path = out_dir(g) / "kernel_grid.csv";
  std::ofstream os(path);
  if (!os) throw stk::ConfigError("cannot write " + path.string());
  os << "r,tau,C,C_norm,Cs,Ct,Qint\n";
  double min_norm = std::numeric_limits<double>::infinity();
  double min_r = 0.0, min_tau = 0.0;
  for (double r : linspace(o.r_max, o.nr))
    for (double tau : linspace(o.tau_max, o.ntau)) {
      const double c = m(r, tau);
      const double cn = c / c00;
      const stk::InteractionRatio q = stk::interaction_ratio(m, r, tau);
      os << num(r) << ',' << num(tau) << ',' << num(c) << ',' << num(cn) << ','
         << num(stk::marginal_spatial(m, r)) << ',' << num(stk::marginal_temporal(m, tau))
         << ',' << num(q.degenerate ? std::nan("") : q.value) << '\n';
      if (cn < min_norm) {
        min_norm = cn;
        min_r = r;
        min_tau = tau;
      }
    }
  std::cout << json{{"file", path.string()},
                    {"c00", c00},
                    {"min_c_norm", min_norm},
                    {"argmin", {{"r", min_r}, {"tau", min_tau}}}}
                   .dump(2)
            << '\n';
  return 0;
}

// ---- simulate --------------------------------------------------------------

struct SimOpts {
  std::string grid_path;
  std::vector<int> n{64, 64};
  std::vector<double> ds;
  int nt = 128;
  double dt = 0.25;
  bool csv = false;
};

int cmd_simulate(const Globals& g, const SimOpts& o) {
  const stk::KernelModel m = resolve_model(g);
  stk::GridSpec grid;
  if (!o.grid_path.empty()) {
    std::ifstream is(o.grid_path);
    if (!is) throw stk::ConfigError("cannot read grid file " + o.grid_path);
    try {
      grid = stk::grid_from_json(json::parse(is));
    } catch (const json::exception& e) {
      throw stk::ConfigError(std::string("malformed grid JSON: ") + e.what());
    }
  } else {
    grid.n_space = o.n;
    grid.ds = o.ds.empty() ? std::vector<double>(o.n.size(), 1.0) : o.ds;
    grid.nt = o.nt;
    grid.dt = o.dt;
  }
  grid.seed = g.seed;
  grid.validate();
  if (grid.dim() != m.dim()) throw stk::DimensionMismatch("grid and model dimensions differ");
  const stk::FieldRealization f = stk::simulate_field(m, grid);
  const fs::path dir = out_dir(g);
  stk::write_field(f, (dir / "field.bin").string(), (dir / "field.json").string());
  if (o.csv) stk::write_field_csv(f, (dir / "field.csv").string());
  for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << json{{"field", (dir / "field.json").string()},
                    {"size", f.values.size()},
                    {"imag_to_rms", f.imag_to_rms}}
                   .dump(2)
            << '\n';
  return 0;
}

// ---- variogram / fit -------------------------------------------------------

struct DataOpts {
  std::string field;
  std::string data;
  stk::VariogramConfig cfg;
};

stk::VariogramSet load_variograms(const Globals& g, const DataOpts& o) {
  if (o.field.empty() == o.data.empty())
    throw stk::ConfigError("give exactly one of --field or --data");
  if (!o.field.empty()) return stk::compute_variograms(stk::read_field(o.field), o.cfg, g.threads);
  return stk::compute_variograms(stk::read_dataset_csv(o.data), o.cfg);
}

int cmd_variogram(const Globals& g, const DataOpts& o) {
  const stk::VariogramSet v = load_variograms(g, o);
  const fs::path dir = out_dir(g);
  write_json(dir / "variogram_spatial.json", stk::variogram_to_json(v.spatial));
  write_json(dir / "variogram_temporal.json", stk::variogram_to_json(v.temporal));
  write_json(dir / "variogram_spacetime.json", stk::variogram_to_json(v.spacetime));
  for (const auto* e : {&v.spatial, &v.temporal, &v.spacetime})
    for (const auto& w : e->warnings) std::cerr << "warning: " << w << '\n';
  std::cout << json{{"spatial_bins", v.spatial.bins.size()},
                    {"temporal_bins", v.temporal.bins.size()},
                    {"spacetime_bins", v.spacetime.bins.size()}}
                   .dump(2)
            << '\n';
  return 0;
}

struct FitOpts {
  std::string family = "ldho";
  std::string dispersion = "quadratic";
  std::string bounds;
  std::string truth;
  stk::NelderMeadOptions nm;
};

int cmd_fit(const Globals& g, const DataOpts& d, const FitOpts& o) {
  const stk::Family family = stk::family_from_string(o.family);
  const stk::Dispersion disp = stk::dispersion_from_string(o.dispersion);
  stk::FitBounds bounds;
  if (!o.bounds.empty()) {
    std::ifstream is(o.bounds);
    if (!is) throw stk::ConfigError("cannot read bounds file " + o.bounds);
    try {
      bounds = stk::bounds_from_json(json::parse(is));
    } catch (const json::parse_error& e) {
      throw stk::ConfigError(std::string("malformed bounds JSON: ") + e.what());
    }
  }
  const stk::VariogramSet v = load_variograms(g, d);
  const stk::FitResult marg = stk::fit_marginals(v, family, disp, bounds, o.nm);
  const stk::FitResult full = stk::fit_full(v, marg.model, bounds, o.nm);
  json report{{"marginal_stage", stk::fit_to_json(marg)},
              {"full", stk::fit_to_json(full)},
              {"joint_objective_theta0", stk::joint_objective(marg.model, v)},
              {"joint_objective_theta_star", full.objective}};
  if (!o.truth.empty()) {
    const stk::KernelModel truth = stk::load_model(o.truth);
    const std::vector<double> t = stk::theta_of(truth);
    json rel = json::object();
    for (std::size_t i = 0; i < full.names.size() && i < t.size(); ++i)
      if (full.names[i] != "nugget" && t[i] != 0.0)
        rel[full.names[i]] = std::abs(full.theta_star[i] - t[i]) / std::abs(t[i]);
    report["relative_error_vs_truth"] = rel;
  }
  const fs::path dir = out_dir(g);
  write_json(dir / "fit.json", report);
  stk::save_model(full.model, (dir / "model_fit.json").string());
  std::cout << json{{"fit", (dir / "fit.json").string()},
                    {"model", (dir / "model_fit.json").string()},
                    {"converged", full.converged && marg.converged},
                    {"objective", full.objective}}
                   .dump(2)
            << '\n';
  if (!full.converged || !marg.converged)
    std::cerr << "warning: optimizer stalled; best-so-far hyperparameters were returned\n";
  return 0;
}

// ---- predict / checks ------------------------------------------------------

int cmd_predict(const Globals& g, const std::string& data_path, const std::string& query_path) {
  const stk::KernelModel m = resolve_model(g);
  const stk::SpaceTimeDataset data = stk::read_dataset_csv(data_path);
  const std::vector<stk::SpaceTimePoint> query = stk::read_points_csv(query_path);
  const stk::Prediction p = stk::predict(m, data, query);
  const fs::path path = out_dir(g) / "predictions.csv";
  stk::write_predictions_csv(query, p, path.string());
  std::cout << json{{"predictions", path.string()}, {"count", query.size()}, {"jitter", p.jitter}}
                   .dump(2)
            << '\n';
  return 0;
}

int cmd_checks(const Globals& g) {
  const stk::KernelModel m = resolve_model(g);
  stk::CheckOptions opt;
  opt.seed = g.seed;
  opt.threads = g.threads;
  const json report = stk::run_checks(m, opt);
  const fs::path path = out_dir(g) / "checks.json";
  write_json(path, report);
  for (const auto& c : report["checks"])
    std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
              << '\n';
  return report["pass"].get<bool>() ? 0 : kExitCheck;
}

void add_data_options(CLI::App* sub, DataOpts& d) {
  sub->add_option("--field", d.field, "Field sidecar JSON written by simulate");
  sub->add_option("--data", d.data, "Scattered data CSV (s1..sd,t,z)");
  sub->add_option("--spatial-bins", d.cfg.spatial_bins, "Spatial marginal lag classes");
  sub->add_option("--temporal-bins", d.cfg.temporal_bins, "Temporal marginal lag classes");
  sub->add_option("--st-spatial-bins", d.cfg.st_spatial_bins, "Space-time spatial classes");
  sub->add_option("--st-temporal-bins", d.cfg.st_temporal_bins, "Space-time temporal classes");
  sub->add_option("--st-temporal-stride", d.cfg.st_temporal_stride,
                  "Space-time temporal class spacing in units of dt");
  sub->add_option("--lag-tolerance", d.cfg.lag_tolerance, "Spatial class half-width");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time covariance kernels: evaluation, simulation, fitting, prediction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--model", g.model_path, "Model JSON file");
  app.add_option("--figure", g.figure, "Built-in preset (fig1|fig2|fig3|ou1|ou2|lin1|lin2|s2)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");

  EvalOpts eo;
  auto* eval = app.add_subcommand("eval", "Write kernel_grid.csv over a lag grid");
  eval->add_option("--r-max", eo.r_max, "Largest spatial lag");
  eval->add_option("--tau-max", eo.tau_max, "Largest time lag");
  eval->add_option("--nr", eo.nr, "Spatial lag count");
  eval->add_option("--ntau", eo.ntau, "Time lag count");

  SimOpts so;
  auto* sim = app.add_subcommand("simulate", "Spectral simulation on a regular grid");
  sim->add_option("--grid", so.grid_path, "Grid JSON {n_space, ds, nt, dt}");
  sim->add_option("--n", so.n, "Nodes per spatial axis")->delimiter(',');
  sim->add_option("--ds", so.ds, "Spacing per spatial axis")->delimiter(',');
  sim->add_option("--nt", so.nt, "Time nodes");
  sim->add_option("--dt", so.dt, "Time spacing");
  sim->add_flag("--csv", so.csv, "Also write field.csv");

  DataOpts vo;
  auto* vario = app.add_subcommand("variogram", "Empirical marginal and space-time variograms");
  add_data_options(vario, vo);

  DataOpts fd;
  FitOpts fo;
  auto* fit = app.add_subcommand("fit", "Two-stage WLS variogram fit");
  add_data_options(fit, fd);
  fit->add_option("--family", fo.family, "ldho|ou");
  fit->add_option("--dispersion", fo.dispersion, "quadratic|linear");
  fit->add_option("--bounds", fo.bounds, "JSON {name: [lo, hi]}");
  fit->add_option("--truth", fo.truth, "Generating model JSON for a recovery report");
  fit->add_option("--max-evals", fo.nm.max_evals, "Evaluation budget per optimizer run");

  std::string data_path, query_path;
  auto* pred = app.add_subcommand("predict", "GP conditional mean and variance");
  pred->add_option("--data", data_path, "Observations CSV (s1..sd,t,z)")->required();
  pred->add_option("--query", query_path, "Query points CSV (s1..sd,t)")->required();

  auto* checks = app.add_subcommand("checks", "Admissibility, oracle, ODE and Gram checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*eval) return cmd_eval(g, eo);
    if (*sim) return cmd_simulate(g, so);
    if (*vario) return cmd_variogram(g, vo);
    if (*fit) return cmd_fit(g, fd, fo);
    if (*pred) return cmd_predict(g, data_path, query_path);
    if (*checks) return cmd_checks(g);
  } catch (const stk::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const stk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
