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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entdist/qstate.hpp"

// Finite-count three-qubit tomography: Poisson count simulation over the 27
// Pauli settings, linear-inversion and maximum-likelihood reconstruction,
// and the seeded Monte Carlo noise sweep over white-noise admixtures.
namespace entdist {

inline constexpr int kNumSettings = 27;  // 3 bases per qubit, 3 qubits
inline constexpr int kNumOutcomes = 8;

// One tomography setting: a Pauli basis per qubit, 0 = X, 1 = Y, 2 = Z.
struct MeasurementSetting {
  std::array<int, 3> bases{};
  std::string label() const;  // e.g. "XYZ"
};

// The complete set of 27 settings in lexicographic order XXX ... ZZZ.
const std::vector<MeasurementSetting>& pauli_settings();

// Rank-1 projector vector of one outcome: the tensor product of single-qubit
// Pauli eigenstates, where outcome bit b_q = 0 (1) selects the +1 (-1)
// eigenstate of qubit q's basis. Outcome index is 4 b0 + 2 b1 + b2.
CVector setting_vector(const MeasurementSetting& s, int outcome);

// Outcome counts for a complete 27-setting scan, with the nominal expected
// total per setting (intensity). Counts are reals so exact expected-count
// tables (noise-free reconstruction checks) fit alongside simulated integer
// counts.
class CountsTable {
 public:
  explicit CountsTable(double intensity);

  double& at(int setting, int outcome);
  double at(int setting, int outcome) const;
  double intensity() const { return intensity_; }
  double setting_total(int setting) const;
  double total() const;

  // CSV columns: setting label, outcome bits, count.
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json() const;
  static CountsTable from_json(const nlohmann::json& j);

 private:
  double intensity_;
  std::array<double, kNumSettings * kNumOutcomes> counts_{};
};

// Exact expected counts: intensity * Tr(s P) per setting and outcome.
CountsTable expected_counts(const QuantumState& s, double intensity);

// Independent Poisson draw per setting and outcome with the expected-count
// means; a zero mean yields a zero count. Deterministic given seed.
CountsTable simulate_counts(const QuantumState& s, double intensity, std::uint64_t seed);

// Accumulates Poisson counts term by term, each term measured with intensity
// weight * total_intensity. By Poisson additivity the total counts are
// distributed exactly as simulate_counts on the mixed state. Weights must be
// nonnegative and sum to 1 within 1e-9. Terms need not be pure.
CountsTable simulate_counts_by_terms(const std::vector<std::pair<double, QuantumState>>& terms,
                                     double total_intensity, std::uint64_t seed);

// Inverts the linear map from Pauli-word expectation estimates (averaged
// over all compatible settings, each normalized by its observed total) to
// the density matrix. Hermitian and trace 1 by construction, but possibly
// non-positive at low counts. Throws if any setting total is zero.
RawMatrix linear_reconstruct(const CountsTable& c);

struct MLEConfig {
  int max_iterations = 5000;
  double convergence_tol = 1e-10;  // relative log-likelihood change
  double min_dilution = 1e-8;      // smallest accepted step before stalling out
};

// Maximum-likelihood reconstruction by iterative R rho R updates, diluting
// the step whenever a full update would lower the (per-setting multinomial)
// log-likelihood, so the likelihood is nondecreasing across iterations.
// Starts from the positivity-clipped linear inversion. Throws on an all-zero
// table or a zero setting total.
QuantumState mle_reconstruct(const CountsTable& c, const MLEConfig& cfg = {});

// Log-likelihood of the counts under the state (up to a counts-only
// constant): sum over settings and outcomes of n * log Tr(s P).
double log_likelihood(const CountsTable& c, const CMatrix& rho);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double q05 = 0.0;
  double q95 = 0.0;
};

// Per-noise-value aggregation over the reconstructed samples. Eigenvalue
// columns are the minimum partial-transpose eigenvalues per cut; fidelity is
// measured against the noise-free base state, and fidelity_noiseless is the
// same for a reconstruction from exact expected counts (no sampling).
struct SweepRow {
  double p = 0.0;
  int n_samples = 0;
  SampleStats a_bc, b_ac, c_ab, fidelity;
  double fidelity_noiseless = 0.0;
  double success_proportion = 0.0;  // a_bc < 0 and b_ac > 0 and c_ab > 0
};

struct SweepConfig {
  std::vector<double> p_values;            // white-noise fractions in [0, 1]
  int samples_per_p = 500;
  double intensity = 30000.0 / 27.0;       // expected counts per setting
  MLEConfig mle{};
  std::uint64_t seed = 0;
  int threads = 1;  // execution detail: never changes results or outputs
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;

  // One row per p; '#'-prefixed header lines carry the resolved config.
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json() const;
};

// Uniform grid of count values from p_min to p_max inclusive.
std::vector<double> default_p_grid(int count = 50, double p_min = 0.0, double p_max = 1.0 / 3.0);

// For each p: mixes base with white noise, simulates counts, reconstructs by
// maximum likelihood, and aggregates cut eigenvalues, fidelities and the
// success rule. Per-sample RNG streams are derived from (seed, p index,
// sample index), so results are bit-identical for a given seed regardless
// of the thread count.
SweepResult monte_carlo_sweep(const QuantumState& base, const SweepConfig& cfg);

}  // namespace entdist
