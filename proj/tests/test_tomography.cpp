// Copyright 2026 The entdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entdist/protocol.hpp"
#include "entdist/tomography.hpp"
#include "testutil.hpp"

using namespace entdist;
using testutil::max_abs_diff;

namespace {

QuantumState basis_state_000() {
  CMatrix m = CMatrix::Zero(8, 8);
  m(0, 0) = 1.0;
  return QuantumState(m, {2, 2, 2});
}

}  // namespace

TEST_CASE("the 27 settings enumerate all Pauli basis combinations in order") {
  const auto& settings = pauli_settings();
  REQUIRE(settings.size() == kNumSettings);
  CHECK(settings.front().label() == "XXX");
  CHECK(settings.back().label() == "ZZZ");
  CHECK(settings[5].label() == "XYZ");  // index 9*0 + 3*1 + 2
  CHECK(settings[14].label() == "YYZ");
  for (int i = 0; i + 1 < kNumSettings; ++i)
    CHECK(settings[i].label() < settings[i + 1].label());
}

TEST_CASE("setting vectors are orthonormal rank-1 bases") {
  for (const auto& s : pauli_settings()) {
    CMatrix sum = CMatrix::Zero(8, 8);
    for (int o = 0; o < kNumOutcomes; ++o) {
      const CVector v = setting_vector(s, o);
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
      for (int o2 = o + 1; o2 < kNumOutcomes; ++o2)
        CHECK(std::abs((v.adjoint() * setting_vector(s, o2))(0)) < 1e-12);
      sum += v * v.adjoint();
    }
    CHECK(max_abs_diff(sum, CMatrix::Identity(8, 8)) < 1e-12);
  }
  // ZZZ outcome bits select computational basis states directly.
  const MeasurementSetting zzz{{2, 2, 2}};
  for (int o = 0; o < 8; ++o) {
    const CVector v = setting_vector(zzz, o);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(v(i) - (i == o ? 1.0 : 0.0)) < 1e-15);
  }
}

TEST_CASE("expected counts are intensity times outcome probabilities") {
  const QuantumState beta = build_beta();
  const CountsTable t = expected_counts(beta, 1000.0);
  for (int s = 0; s < kNumSettings; ++s)
    CHECK(t.setting_total(s) == doctest::Approx(1000.0).epsilon(1e-12));
  // The ZZZ setting reads off the diagonal.
  for (int o = 0; o < 8; ++o)
    CHECK(t.at(26, o) == doctest::Approx(1000.0 * beta.matrix()(o, o).real()).epsilon(1e-12));
}

TEST_CASE("simulated counts are deterministic in the seed") {
  const QuantumState beta = build_beta();
  const CountsTable a = simulate_counts(beta, 500.0, 42);
  const CountsTable b = simulate_counts(beta, 500.0, 42);
  const CountsTable c = simulate_counts(beta, 500.0, 43);
  double diff_ab = 0.0, diff_ac = 0.0;
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) {
      diff_ab += std::abs(a.at(s, o) - b.at(s, o));
      diff_ac += std::abs(a.at(s, o) - c.at(s, o));
    }
  CHECK(diff_ab == 0.0);
  CHECK(diff_ac > 0.0);
}

TEST_CASE("zero-probability outcomes draw zero counts") {
  const CountsTable t = simulate_counts(basis_state_000(), 10000.0, 9);
  // In the ZZZ setting only outcome 0 can fire.
  for (int o = 1; o < 8; ++o) CHECK(t.at(26, o) == 0.0);
  CHECK(t.at(26, 0) > 0.0);
}

TEST_CASE("counts obey the law of large numbers") {
  const QuantumState beta = build_beta();
  const double intensity = 400.0;
  const int n_seeds = 2000;
  const double expect = intensity * beta.matrix()(0, 0).real();  // ZZZ outcome 000
  double sum = 0.0, sumsq = 0.0;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const double x = simulate_counts(beta, intensity, seed).at(26, 0);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n_seeds;
  const double var = (sumsq - n_seeds * mean * mean) / (n_seeds - 1);
  const double se = std::sqrt(expect / n_seeds);
  CHECK(std::abs(mean - expect) < 4.0 * se);
  // Poisson: variance equals the mean, up to sampling error of the variance.
  const double var_se = expect * std::sqrt(2.0 / (n_seeds - 1));
  CHECK(std::abs(var - expect) < 5.0 * var_se);
}

TEST_CASE("termwise simulation matches the mixture in distribution") {
  const QuantumState beta = build_beta();
  const QuantumState noisy = add_white_noise(beta, {.p = 0.3});
  const QuantumState mixed(CMatrix::Identity(8, 8) / 8.0, {2, 2, 2});
  const std::vector<std::pair<double, QuantumState>> terms{{0.7, beta}, {0.3, mixed}};
  const double intensity = 300.0;
  const int n_seeds = 1500;

  // Compare the mean count in one slot against the mixed-state expectation.
  double sum = 0.0;
  for (int seed = 0; seed < n_seeds; ++seed)
    sum += simulate_counts_by_terms(terms, intensity, seed).at(0, 0);
  const double mean = sum / n_seeds;
  const double expect = expected_counts(noisy, intensity).at(0, 0);
  const double se = std::sqrt(expect / n_seeds);
  CHECK(std::abs(mean - expect) < 4.0 * se);

  // A single term of weight one is the plain simulator, draw for draw.
  const CountsTable direct = simulate_counts(beta, intensity, 5);
  const CountsTable wrapped = simulate_counts_by_terms({{1.0, beta}}, intensity, 5);
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) CHECK(direct.at(s, o) == wrapped.at(s, o));

  CHECK_THROWS_AS(simulate_counts_by_terms({{0.6, beta}, {0.6, mixed}}, 100.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_counts_by_terms({{-0.2, beta}, {1.2, mixed}}, 100.0, 1),
                  std::invalid_argument);
}

TEST_CASE("linear inversion is exact on noise-free expected counts") {
  Rng rng(67);
  const QuantumState beta = build_beta();
  for (const QuantumState& s :
       {beta, testutil::random_mixed_state({2, 2, 2}, rng), basis_state_000()}) {
    const RawMatrix r = linear_reconstruct(expected_counts(s, 1234.5));
    CHECK(max_abs_diff(r.matrix(), s.matrix()) < 1e-10);
  }
}

TEST_CASE("linear inversion requires every setting to have counts") {
  CountsTable t(100.0);
  t.at(0, 0) = 50.0;
  CHECK_THROWS_AS(linear_reconstruct(t), std::runtime_error);
}

TEST_CASE("maximum likelihood fixes the noise-free reconstruction") {
  const QuantumState beta = build_beta();
  const QuantumState r = mle_reconstruct(expected_counts(beta, 30000.0 / 27.0));
  CHECK(fidelity(r, beta) >= 1.0 - 1e-6);
}

TEST_CASE("maximum likelihood output is physical and does not lower the likelihood") {
  const QuantumState beta = build_beta();
  for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const CountsTable counts = simulate_counts(add_white_noise(beta, {.p = 0.15}), 200.0, seed);
    const QuantumState r = mle_reconstruct(counts);  // constructor enforces physicality
    const RawMatrix lin = linear_reconstruct(counts);
    // The MLE must beat the clipped linear start it grew from; compare against
    // the uniform state as a solver-independent baseline.
    const CMatrix uniform = CMatrix::Identity(8, 8) / 8.0;
    CHECK(log_likelihood(counts, r.matrix()) >= log_likelihood(counts, uniform) - 1e-9);
    CHECK(min_eigenvalue(r) >= -kPsdTol);
    (void)lin;
  }
}

TEST_CASE("maximum likelihood concentrates on a basis state") {
  const CountsTable counts = simulate_counts(basis_state_000(), 1000.0, 17);
  const QuantumState r = mle_reconstruct(counts);
  CHECK(r.matrix()(0, 0).real() >= 0.99);
}

TEST_CASE("high-intensity reconstruction reaches fidelity 0.999") {
  const QuantumState beta = build_beta();
  const CountsTable counts = simulate_counts(beta, 1e6, 29);
  CHECK(fidelity(mle_reconstruct(counts), beta) >= 0.999);
}

TEST_CASE("reconstruction throws on an all-zero table") {
  CountsTable t(100.0);
  CHECK_THROWS(mle_reconstruct(t));
}

TEST_CASE("counts tables round-trip through CSV and JSON") {
  const QuantumState beta = build_beta();
  const CountsTable t = simulate_counts(beta, 800.0, 3);

  std::ostringstream csv;
  t.write_csv(csv);
  std::istringstream lines(csv.str());
  std::string line;
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line.find("setting") != 0) ++rows;
  CHECK(rows == kNumSettings * kNumOutcomes);

  const CountsTable back = CountsTable::from_json(t.to_json());
  CHECK(back.intensity() == t.intensity());
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) CHECK(back.at(s, o) == t.at(s, o));
}

TEST_CASE("default p grid is uniform and inclusive") {
  const std::vector<double> grid = default_p_grid(50, 0.0, 1.0 / 3.0);
  REQUIRE(grid.size() == 50);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    CHECK(grid[i + 1] - grid[i] == doctest::Approx(grid[1] - grid[0]).epsilon(1e-9));
  CHECK_THROWS_AS(default_p_grid(1, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("a small sweep is reproducible and thread-count independent") {
  const QuantumState beta = build_beta();
  SweepConfig cfg;
  cfg.p_values = {0.0, 0.2, 1.0};
  cfg.samples_per_p = 4;
  cfg.intensity = 400.0;
  cfg.seed = 99;
  cfg.threads = 1;

  const SweepResult r1 = monte_carlo_sweep(beta, cfg);
  cfg.threads = 3;
  const SweepResult r2 = monte_carlo_sweep(beta, cfg);

  std::ostringstream csv1, csv2;
  r1.write_csv(csv1);
  r2.write_csv(csv2);
  CHECK(csv1.str() == csv2.str());
  REQUIRE(r1.rows.size() == 3);
  for (const SweepRow& row : r1.rows) {
    CHECK(row.n_samples == 4);
    CHECK(row.a_bc.q05 <= row.a_bc.mean + 1e-12);
    CHECK(row.a_bc.mean <= row.a_bc.q95 + 1e-12);
    CHECK(row.fidelity.mean > 0.0);
    CHECK(row.success_proportion >= 0.0);
    CHECK(row.success_proportion <= 1.0);
  }
  // Full white noise destroys the entanglement across A|BC: the reconstructed
  // eigenvalue sits near +1/8 and the success rule can never fire.
  CHECK(r1.rows.back().success_proportion == 0.0);
  CHECK(r1.rows.back().a_bc.mean > 0.05);

  const nlohmann::json j = r1.to_json();
  CHECK(j["rows"].size() == 3);
  CHECK(!j["config"].contains("threads"));  // execution detail, not content
}

TEST_CASE("sweep validates its configuration") {
  const QuantumState beta = build_beta();
  SweepConfig cfg;
  cfg.p_values = {0.0, 1.5};
  CHECK_THROWS_AS(monte_carlo_sweep(beta, cfg), std::invalid_argument);
  cfg.p_values = {0.1};
  cfg.samples_per_p = 0;
  CHECK_THROWS_AS(monte_carlo_sweep(beta, cfg), std::invalid_argument);
  cfg.samples_per_p = 2;
  cfg.intensity = 0.0;
  CHECK_THROWS_AS(monte_carlo_sweep(beta, cfg), std::invalid_argument);
  cfg.intensity = 100.0;
  cfg.threads = 0;
  CHECK_THROWS_AS(monte_carlo_sweep(beta, cfg), std::invalid_argument);
}
