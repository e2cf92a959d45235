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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "stk/errors.hpp"
#include "stk/kernel.hpp"
#include "stk/presets.hpp"
#include "stk/simulate.hpp"
#include "test_util.hpp"

using namespace stk;
using stk_test::kPi;

namespace {

KernelModel unit_model(double nugget = 0.0) {
  const LdhoParams u = LdhoParams::from_damped(1.0, 2.0, kPi / 2, Regime::Underdamped, 2.0, 0.5,
                                               Dispersion::Quadratic, 2);
  return KernelModel(u.with_c0(1.0 / ldho_kernel(u, 0, 0)), nugget);
}

GridSpec grid(int n, int nt, std::uint64_t seed) { return GridSpec{{n, n}, {1.0, 1.0}, nt, 0.25, seed}; }

}  // namespace

TEST_CASE("grid validation and JSON") {
  CHECK_THROWS_AS(GridSpec({{1, 4}, {1.0, 1.0}, 4, 1.0, 0}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({{4, 4}, {1.0}, 4, 1.0, 0}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({{4, 4}, {1.0, -1.0}, 4, 1.0, 0}).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec({{4, 4, 4, 4}, {1, 1, 1, 1}, 4, 1.0, 0}).validate(), ConfigError);
  const GridSpec g = grid(8, 6, 99);
  const GridSpec back = grid_from_json(grid_to_json(g));
  CHECK(back.n_space == g.n_space);
  CHECK(back.ds == g.ds);
  CHECK(back.nt == g.nt);
  CHECK(back.dt == g.dt);
  CHECK(back.seed == g.seed);
}

TEST_CASE("simulated field reproduces variance and lag-one correlation") {
  const KernelModel m = unit_model(0.1);
  const FieldRealization f = simulate_field(m, grid(64, 128, 3));
  REQUIRE(f.values.size() == 64u * 64u * 128u);
  CHECK(f.imag_to_rms <= 1e-10);
  CHECK(f.warnings.empty());
  const auto cov = empirical_covariance(f, {{{0, 0}, 0}, {{1, 0}, 0}});
  CHECK(cov[0] == doctest::Approx(1.1).epsilon(0.1));
  CHECK(cov[1] / cov[0] == doctest::Approx(m(1.0, 0.0) / 1.1).epsilon(0.05 / (m(1.0, 0.0) / 1.1)));
  double mean_sq = 0.0;
  for (double v : f.values) mean_sq += v * v;
  CHECK(cov[0] == doctest::Approx(mean_sq / f.values.size()).epsilon(1e-12));
}

TEST_CASE("simulation is deterministic per seed") {
  const KernelModel m = unit_model(0.05);
  const FieldRealization a = simulate_field(m, grid(16, 16, 5));
  const FieldRealization b = simulate_field(m, grid(16, 16, 5));
  const FieldRealization c = simulate_field(m, grid(16, 16, 6));
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.rng == std::string("philox4x64-10"));
}

TEST_CASE("coarse grids raise a truncation warning") {
  const FieldRealization f = simulate_field(preset_model("fig1"), GridSpec{{8, 8}, {5.0, 5.0}, 8, 0.25, 1});
  REQUIRE_FALSE(f.warnings.empty());
  CHECK(f.warnings[0].find("SpectralTruncationWarning") != std::string::npos);
}

TEST_CASE("white-noise fields have no off-origin covariance") {
  const KernelModel m(LdhoParams(1e-300, 1.0, 3.0, 1.0, 0.0, Dispersion::Quadratic, 2), 1.0);
  const FieldRealization f = simulate_field(m, grid(32, 32, 11));
  const auto cov = empirical_covariance(f, {{{0, 0}, 0}, {{1, 0}, 0}, {{0, 2}, 1}, {{3, 1}, 4}});
  CHECK(cov[0] == doctest::Approx(1.0).epsilon(0.05));
  const double pairs = 31.0 * 32 * 32;
  for (int i = 1; i < 4; ++i) CHECK(std::abs(cov[i]) <= 3.0 / std::sqrt(pairs / 4));
}

TEST_CASE("temporal covariance estimate changes sign near the zero crossing") {
  const LdhoParams p = LdhoParams::from_damped(1.0, 6.0, kPi, Regime::Underdamped, 0.5, 0.0,
                                               Dispersion::Quadratic, 2);
  const KernelModel m(p);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (marginal_temporal(m, mid) > 0 ? lo : hi) = mid;
  }
  const FieldRealization f = simulate_field(m, GridSpec{{32, 32}, {1.0, 1.0}, 256, 0.05, 2});
  std::vector<GridLag> lags;
  for (int k = 0; k < 20; ++k) lags.push_back({{0, 0}, k});
  const auto cov = empirical_covariance(f, lags);
  int first_negative = -1;
  for (int k = 0; k < 20; ++k)
    if (cov[k] < 0) {
      first_negative = k;
      break;
    }
  REQUIRE(first_negative > 0);
  CHECK(std::abs(first_negative * 0.05 - lo) <= 0.1);
}

TEST_CASE("empirical covariance rejects lags beyond the grid") {
  const FieldRealization f = simulate_field(unit_model(), grid(8, 8, 1));
  CHECK_THROWS_AS(empirical_covariance(f, {{{8, 0}, 0}}), LagOutOfRange);
  CHECK_THROWS_AS(empirical_covariance(f, {{{0, 0}, 9}}), LagOutOfRange);
  CHECK_THROWS_AS(empirical_covariance(f, {{{0}, 0}}), DimensionMismatch);
}

TEST_CASE("seed-averaged covariance matches the target kernel") {
  const KernelModel m = unit_model();
  const std::vector<GridLag> lags{{{0, 0}, 0}, {{1, 0}, 0}, {{2, 1}, 0}, {{3, 0}, 0},
                                  {{0, 0}, 2}, {{0, 0}, 4}, {{0, 0}, 8}, {{1, 1}, 2},
                                  {{2, 0}, 4}, {{0, 1}, 6}};
  const int seeds = 20;
  std::vector<std::vector<double>> est;
  for (int s = 0; s < seeds; ++s)
    est.push_back(empirical_covariance(simulate_field(m, grid(32, 64, 100 + s)), lags));
  for (std::size_t i = 0; i < lags.size(); ++i) {
    double mean = 0, var = 0;
    for (int s = 0; s < seeds; ++s) mean += est[s][i] / seeds;
    for (int s = 0; s < seeds; ++s) var += (est[s][i] - mean) * (est[s][i] - mean) / (seeds - 1);
    const double se = std::sqrt(var / seeds);
    const double r = std::hypot(lags[i].ds[0], lags[i].ds[1]);
    const double target = m(r, 0.25 * lags[i].dt);
    CAPTURE(i);
    CHECK(std::abs(mean - target) <= 4 * se);
  }
}

TEST_CASE("field files round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "stk_field_io";
  fs::create_directories(dir);
  const FieldRealization f = simulate_field(unit_model(0.01), grid(6, 5, 42));
  write_field(f, (dir / "f.bin").string(), (dir / "f.json").string());
  CHECK(fs::file_size(dir / "f.bin") == f.values.size() * sizeof(double));
  const FieldRealization back = read_field((dir / "f.json").string());
  CHECK(back.values == f.values);
  CHECK(back.grid.seed == 42);
  CHECK(back.model == f.model);
  std::ifstream js(dir / "f.json");
  const auto side = nlohmann::json::parse(js);
  CHECK(side.at("rng") == "philox4x64-10");
  CHECK(side.at("seed") == 42);
  write_field_csv(f, (dir / "f.csv").string());
  const SpaceTimeDataset d = field_to_dataset(f);
  CHECK(d.size() == f.values.size());
  CHECK(d.points[1].s[1] == 1.0);  // C order: last spatial axis fastest
  CHECK(d.points[36].t == 0.25);
  fs::remove_all(dir);
}
