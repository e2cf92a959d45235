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
// Python bindings. Models cross the boundary as JSON text; the Python
// package wraps these entry points with dict-based helpers.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "stk/checks.hpp"
#include "stk/errors.hpp"
#include "stk/fit.hpp"
#include "stk/gp.hpp"
#include "stk/kernel.hpp"
#include "stk/model_json.hpp"
#include "stk/presets.hpp"
#include "stk/simulate.hpp"
#include "stk/spectral.hpp"

namespace py = pybind11;
using stk::KernelModel;

namespace {

KernelModel parse(const std::string& model_json) {
  return stk::model_from_json(nlohmann::json::parse(model_json));
}

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array eval_kernel(const std::string& model_json, const Array& r, const Array& tau) {
  const KernelModel m = parse(model_json);
  if (r.size() != tau.size()) throw stk::ConfigError("r and tau must have the same size");
  Array out(r.request().shape);
  const double* pr = r.data();
  const double* pt = tau.data();
  double* po = out.mutable_data();
  for (py::ssize_t i = 0; i < r.size(); ++i) po[i] = m(pr[i], pt[i]);
  return out;
}

double ratio(const std::string& model_json, double r, double tau) {
  const stk::InteractionRatio q = stk::interaction_ratio(parse(model_json), r, tau);
  return q.degenerate ? std::numeric_limits<double>::quiet_NaN() : q.value;
}

std::vector<stk::SpaceTimePoint> rows_to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) < 2) throw stk::ConfigError("points must be an (n, d+1) array");
  const auto n = a.shape(0), cols = a.shape(1);
  std::vector<stk::SpaceTimePoint> pts(static_cast<std::size_t>(n));
  for (py::ssize_t i = 0; i < n; ++i) {
    pts[i].s.assign(a.data(i, 0), a.data(i, 0) + cols - 1);
    pts[i].t = *a.data(i, cols - 1);
  }
  return pts;
}

stk::GridSpec make_grid(const std::vector<int>& n, const std::vector<double>& ds, int nt,
                        double dt, std::uint64_t seed) {
  stk::GridSpec g{n, ds, nt, dt, seed};
  if (g.ds.size() == 1 && g.n_space.size() > 1) g.ds.assign(g.n_space.size(), ds[0]);
  g.validate();
  return g;
}

Array simulate(const std::string& model_json, const std::vector<int>& n,
               const std::vector<double>& ds, int nt, double dt, std::uint64_t seed) {
  const stk::FieldRealization f = stk::simulate_field(parse(model_json), make_grid(n, ds, nt, dt, seed));
  std::vector<py::ssize_t> shape{nt};
  shape.insert(shape.end(), n.begin(), n.end());
  Array out(shape);
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

std::string fit_field(const Array& values, const std::vector<double>& ds, double dt,
                      const std::string& family, const std::string& dispersion) {
  if (values.ndim() < 2 || values.ndim() > 4)
    throw stk::ConfigError("field must have shape (nt, n1[, n2[, n3]])");
  std::vector<int> n;
  for (py::ssize_t k = 1; k < values.ndim(); ++k) n.push_back(static_cast<int>(values.shape(k)));
  stk::FieldRealization f;
  f.grid = make_grid(n, ds, static_cast<int>(values.shape(0)), dt, 0);
  f.values.assign(values.data(), values.data() + values.size());
  const stk::VariogramSet v = stk::compute_variograms(f);
  const stk::FitResult marg = stk::fit_marginals(v, stk::family_from_string(family),
                                                 stk::dispersion_from_string(dispersion));
  const stk::FitResult full = stk::fit_full(v, marg.model);
  nlohmann::json j = stk::fit_to_json(full);
  j["model"] = stk::model_to_json(full.model);
  return j.dump();
}

py::tuple predict(const std::string& model_json, const Array& points, const Array& values,
                  const Array& query, double mean) {
  stk::SpaceTimeDataset data;
  data.points = rows_to_points(points);
  data.values.assign(values.data(), values.data() + values.size());
  data.mean = mean;
  const stk::Prediction p = stk::predict(parse(model_json), data, rows_to_points(query));
  Array mu(p.mean.size()), var(p.variance.size());
  std::copy(p.mean.data(), p.mean.data() + p.mean.size(), mu.mutable_data());
  std::copy(p.variance.data(), p.variance.data() + p.variance.size(), var.mutable_data());
  return py::make_tuple(mu, var);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of stkernels";

  py::register_exception<stk::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<stk::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("preset_names", &stk::preset_names);
  m.def("preset", [](const std::string& name) { return stk::model_to_json(stk::preset_model(name)).dump(); });
  m.def("normalize_model", [](const std::string& s) { return stk::model_to_json(parse(s)).dump(); });
  m.def("kernel", &eval_kernel, py::arg("model"), py::arg("r"), py::arg("tau"));
  m.def("variance", [](const std::string& s) { return stk::kernel_variance(parse(s)); });
  m.def("oracle", [](const std::string& s, double r, double tau) {
    const stk::OracleResult o = stk::kernel_oracle(parse(s), r, tau);
    return py::make_tuple(o.value, o.error);
  });
  m.def("interaction_ratio", &ratio, py::arg("model"), py::arg("r"), py::arg("tau"));
  m.def("simulate", &simulate, py::arg("model"), py::arg("n"), py::arg("ds"), py::arg("nt"),
        py::arg("dt"), py::arg("seed"));
  m.def("fit_field", &fit_field, py::arg("values"), py::arg("ds"), py::arg("dt"),
        py::arg("family"), py::arg("dispersion"));
  m.def("predict", &predict, py::arg("model"), py::arg("points"), py::arg("values"),
        py::arg("query"), py::arg("mean"));
  m.def("checks", [](const std::string& s, std::uint64_t seed) {
    stk::CheckOptions opt;
    opt.seed = seed;
    return stk::run_checks(parse(s), opt).dump();
  });
}
