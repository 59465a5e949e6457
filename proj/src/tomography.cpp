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

#include "entdist/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "entdist/protocol.hpp"
#include "entdist/random.hpp"

namespace entdist {

namespace {

using Matrix8 = Eigen::Matrix<Complex, 8, 8>;
using ProjMatrix = Eigen::Matrix<Complex, 8, Eigen::Dynamic>;
constexpr int kSlots = kNumSettings * kNumOutcomes;

const char kBasisLetter[3] = {'X', 'Y', 'Z'};

// +1/-1 eigenstates of X, Y, Z.
Eigen::Vector2cd basis_eigenstate(int basis, int bit) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (basis) {
    case 0:
      return bit == 0 ? Eigen::Vector2cd(s, s) : Eigen::Vector2cd(s, -s);
    case 1:
      return bit == 0 ? Eigen::Vector2cd(s, Complex(0.0, s))
                      : Eigen::Vector2cd(s, Complex(0.0, -s));
    case 2:
      return bit == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    default:
      throw std::invalid_argument("basis_eigenstate: basis must be 0, 1 or 2");
  }
}

// All 216 projector vectors as columns, slot index = 8 * setting + outcome.
const ProjMatrix& projector_columns() {
  static const ProjMatrix v = [] {
    ProjMatrix m(8, kSlots);
    const auto& settings = pauli_settings();
    for (int s = 0; s < kNumSettings; ++s)
      for (int o = 0; o < kNumOutcomes; ++o) m.col(8 * s + o) = setting_vector(settings[s], o);
    return m;
  }();
  return v;
}

// Outcome probabilities Tr(rho P) for all 216 slots.
Eigen::VectorXd slot_probabilities(const Matrix8& rho) {
  const ProjMatrix& v = projector_columns();
  const ProjMatrix w = rho * v;
  return v.conjugate().cwiseProduct(w).colwise().sum().real().transpose();
}

double counts_log_likelihood(const std::array<double, kSlots>& n, const Eigen::VectorXd& p) {
  double ll = 0.0;
  for (int j = 0; j < kSlots; ++j)
    if (n[j] > 0.0) ll += n[j] * std::log(std::max(p(j), 1e-300));
  return ll;
}

std::array<double, kSlots> flatten(const CountsTable& c) {
  std::array<double, kSlots> n{};
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) n[8 * s + o] = c.at(s, o);
  return n;
}

void format_double(std::ostream& os, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  os << buf;
}

SampleStats aggregate(std::vector<double> values) {
  SampleStats st;
  const int n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / n;
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.stddev = std::sqrt(ss / (n - 1));
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double h = q * (n - 1);
    const int lo = static_cast<int>(std::floor(h));
    if (lo + 1 >= n) return values[n - 1];
    return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
  };
  st.q05 = quantile(0.05);
  st.q95 = quantile(0.95);
  return st;
}

}  // namespace

std::string MeasurementSetting::label() const {
  std::string out(3, '?');
  for (int q = 0; q < 3; ++q) {
    if (bases[q] < 0 || bases[q] > 2)
      throw std::invalid_argument("MeasurementSetting: basis must be 0, 1 or 2");
    out[q] = kBasisLetter[bases[q]];
  }
  return out;
}

const std::vector<MeasurementSetting>& pauli_settings() {
  static const std::vector<MeasurementSetting> settings = [] {
    std::vector<MeasurementSetting> out;
    out.reserve(kNumSettings);
    for (int b0 = 0; b0 < 3; ++b0)
      for (int b1 = 0; b1 < 3; ++b1)
        for (int b2 = 0; b2 < 3; ++b2) out.push_back({{b0, b1, b2}});
    return out;
  }();
  return settings;
}

CVector setting_vector(const MeasurementSetting& s, int outcome) {
  if (outcome < 0 || outcome >= kNumOutcomes)
    throw std::invalid_argument("setting_vector: outcome out of range");
  CVector v = CVector::Ones(1);
  for (int q = 0; q < 3; ++q) {
    const int bit = (outcome >> (2 - q)) & 1;
    v = kron(v, CVector(basis_eigenstate(s.bases[q], bit)));
  }
  return v;
}

CountsTable::CountsTable(double intensity) : intensity_(intensity) {
  if (!(intensity > 0.0)) throw std::invalid_argument("CountsTable: intensity must be positive");
}

double& CountsTable::at(int setting, int outcome) {
  if (setting < 0 || setting >= kNumSettings || outcome < 0 || outcome >= kNumOutcomes)
    throw std::out_of_range("CountsTable::at: index out of range");
  return counts_[setting * kNumOutcomes + outcome];
}

double CountsTable::at(int setting, int outcome) const {
  return const_cast<CountsTable*>(this)->at(setting, outcome);
}

double CountsTable::setting_total(int setting) const {
  double t = 0.0;
  for (int o = 0; o < kNumOutcomes; ++o) t += at(setting, o);
  return t;
}

double CountsTable::total() const {
  double t = 0.0;
  for (double c : counts_) t += c;
  return t;
}

void CountsTable::write_csv(std::ostream& os) const {
  os << "setting,outcome,count\n";
  const auto& settings = pauli_settings();
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) {
      os << settings[s].label() << ',' << ((o >> 2) & 1) << ((o >> 1) & 1) << (o & 1) << ',';
      format_double(os, at(s, o));
      os << '\n';
    }
}

nlohmann::json CountsTable::to_json() const {
  nlohmann::json counts = nlohmann::json::array();
  const auto& settings = pauli_settings();
  for (int s = 0; s < kNumSettings; ++s) {
    std::vector<double> row(kNumOutcomes);
    for (int o = 0; o < kNumOutcomes; ++o) row[o] = at(s, o);
    counts.push_back(nlohmann::json{{"setting", settings[s].label()}, {"counts", row}});
  }
  return nlohmann::json{{"intensity", intensity_}, {"settings", std::move(counts)}};
}

CountsTable CountsTable::from_json(const nlohmann::json& j) {
  CountsTable t(j.at("intensity").get<double>());
  const auto& settings = pauli_settings();
  const nlohmann::json& rows = j.at("settings");
  if (rows.size() != kNumSettings)
    throw std::invalid_argument("CountsTable: expected 27 settings");
  for (int s = 0; s < kNumSettings; ++s) {
    const nlohmann::json& row = rows.at(s);
    if (row.at("setting").get<std::string>() != settings[s].label())
      throw std::invalid_argument("CountsTable: settings out of order");
    const auto counts = row.at("counts").get<std::vector<double>>();
    if (counts.size() != kNumOutcomes)
      throw std::invalid_argument("CountsTable: expected 8 outcomes per setting");
    for (int o = 0; o < kNumOutcomes; ++o) {
      if (counts[o] < 0.0) throw std::invalid_argument("CountsTable: negative count");
      t.at(s, o) = counts[o];
    }
  }
  return t;
}

namespace {

void check_three_qubits(const QuantumState& s, const char* who) {
  if (s.dims() != std::vector<int>{2, 2, 2})
    throw std::invalid_argument(std::string(who) + ": expected a three-qubit state");
}

void add_poisson_counts(CountsTable& table, const CMatrix& rho, double intensity, Rng& rng) {
  const ProjMatrix& v = projector_columns();
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o) {
      const int j = 8 * s + o;
      const double mean = intensity * std::max(0.0, (v.col(j).adjoint() * rho * v.col(j))(0).real());
      if (mean > 0.0) {
        std::poisson_distribution<long long> poisson(mean);
        table.at(s, o) += static_cast<double>(poisson(rng));
      }
    }
}

}  // namespace

CountsTable expected_counts(const QuantumState& s, double intensity) {
  check_three_qubits(s, "expected_counts");
  CountsTable t(intensity);
  const ProjMatrix& v = projector_columns();
  for (int si = 0; si < kNumSettings; ++si)
    for (int o = 0; o < kNumOutcomes; ++o) {
      const int j = 8 * si + o;
      t.at(si, o) = intensity * std::max(0.0, (v.col(j).adjoint() * s.matrix() * v.col(j))(0).real());
    }
  return t;
}

CountsTable simulate_counts(const QuantumState& s, double intensity, std::uint64_t seed) {
  check_three_qubits(s, "simulate_counts");
  CountsTable t(intensity);
  Rng rng(splitmix64(seed));
  add_poisson_counts(t, s.matrix(), intensity, rng);
  return t;
}

CountsTable simulate_counts_by_terms(const std::vector<std::pair<double, QuantumState>>& terms,
                                     double total_intensity, std::uint64_t seed) {
  if (terms.empty()) throw std::invalid_argument("simulate_counts_by_terms: no terms");
  double sum = 0.0;
  for (const auto& [w, state] : terms) {
    if (w < 0.0) throw std::invalid_argument("simulate_counts_by_terms: negative weight");
    check_three_qubits(state, "simulate_counts_by_terms");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("simulate_counts_by_terms: weights must sum to 1");

  CountsTable t(total_intensity);
  Rng rng(splitmix64(seed));
  for (const auto& [w, state] : terms)
    if (w > 0.0) add_poisson_counts(t, state.matrix(), w * total_intensity, rng);
  return t;
}

RawMatrix linear_reconstruct(const CountsTable& c) {
  const auto& settings = pauli_settings();
  std::array<double, kNumSettings> totals;
  for (int s = 0; s < kNumSettings; ++s) {
    totals[s] = c.setting_total(s);
    if (totals[s] <= 0.0)
      throw std::runtime_error("linear_reconstruct: setting " + settings[s].label() +
                               " has zero total counts");
  }

  // Estimate each Pauli-word expectation by averaging the signed outcome
  // frequencies over every setting that measures that word, then invert
  // rho = (1/8) sum_w <w> sigma_w.
  Eigen::Matrix2cd pauli[4];
  pauli[0] = Eigen::Matrix2cd::Identity();
  pauli[1] << 0, 1, 1, 0;
  pauli[2] << 0, Complex(0, -1), Complex(0, 1), 0;
  pauli[3] << 1, 0, 0, -1;

  CMatrix rho = CMatrix::Zero(8, 8);
  for (int w0 = 0; w0 < 4; ++w0)
    for (int w1 = 0; w1 < 4; ++w1)
      for (int w2 = 0; w2 < 4; ++w2) {
        const int word[3] = {w0, w1, w2};
        double estimate = 0.0;
        int compatible = 0;
        for (int s = 0; s < kNumSettings; ++s) {
          bool match = true;
          for (int q = 0; q < 3; ++q)
            if (word[q] != 0 && settings[s].bases[q] != word[q] - 1) match = false;
          if (!match) continue;
          double signed_sum = 0.0;
          for (int o = 0; o < kNumOutcomes; ++o) {
            double sign = 1.0;
            for (int q = 0; q < 3; ++q)
              if (word[q] != 0 && ((o >> (2 - q)) & 1)) sign = -sign;
            signed_sum += sign * c.at(s, o);
          }
          estimate += signed_sum / totals[s];
          ++compatible;
        }
        estimate /= compatible;
        rho += (estimate / 8.0) * kron(kron(pauli[w0], pauli[w1]), pauli[w2]);
      }
  return RawMatrix(std::move(rho), {2, 2, 2});
}

double log_likelihood(const CountsTable& c, const CMatrix& rho) {
  if (rho.rows() != 8 || rho.cols() != 8)
    throw std::invalid_argument("log_likelihood: expected an 8x8 matrix");
  const Matrix8 r = rho;
  return counts_log_likelihood(flatten(c), slot_probabilities(r));
}

QuantumState mle_reconstruct(const CountsTable& c, const MLEConfig& cfg) {
  if (cfg.max_iterations < 1 || cfg.convergence_tol <= 0.0 || cfg.min_dilution <= 0.0)
    throw std::invalid_argument("mle_reconstruct: invalid configuration");
  const std::array<double, kSlots> n = flatten(c);
  const double n_total = c.total();
  if (n_total <= 0.0) throw std::invalid_argument("mle_reconstruct: all counts are zero");

  // Interior starting point: linear inversion with its spectrum clipped
  // strictly positive, so no outcome starts at zero probability.
  Matrix8 rho;
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linear_reconstruct(c).matrix());
    const RVector lambda = es.eigenvalues().cwiseMax(1e-6);
    rho = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace().real();
  }

  const ProjMatrix& v = projector_columns();
  double ll = counts_log_likelihood(n, slot_probabilities(rho));
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Eigen::VectorXd p = slot_probabilities(rho);
    Eigen::VectorXd weights(kSlots);
    for (int j = 0; j < kSlots; ++j)
      weights(j) = n[j] > 0.0 ? n[j] / std::max(p(j), 1e-12) : 0.0;
    Matrix8 r = (v * weights.asDiagonal() * v.adjoint()) / n_total;
    r = 0.5 * (r + r.adjoint()).eval();

    auto step = [&](const Matrix8& op) {
      Matrix8 next = op * rho * op;
      next = 0.5 * (next + next.adjoint()).eval();
      next /= next.trace().real();
      return next;
    };

    Matrix8 candidate = step(r);
    double ll_next = counts_log_likelihood(n, slot_probabilities(candidate));
    if (ll_next < ll) {
      // Dilute the update until the likelihood stops decreasing.
      double eps = 0.5;
      while (eps >= cfg.min_dilution) {
        const Matrix8 diluted = (Matrix8::Identity() + eps * r) / (1.0 + eps);
        candidate = step(diluted);
        ll_next = counts_log_likelihood(n, slot_probabilities(candidate));
        if (ll_next >= ll) break;
        eps *= 0.5;
      }
      if (ll_next < ll) break;  // no improving step left: numerical optimum
    }
    const bool converged = std::abs(ll_next - ll) < cfg.convergence_tol * std::max(1.0, std::abs(ll_next));
    rho = candidate;
    ll = ll_next;
    if (converged) break;
  }

  return QuantumState(CMatrix(rho), {2, 2, 2}, "mle_reconstruction");
}

std::vector<double> default_p_grid(int count, double p_min, double p_max) {
  if (count < 2) throw std::invalid_argument("default_p_grid: need at least two values");
  if (p_min > p_max) throw std::invalid_argument("default_p_grid: p_min must not exceed p_max");
  std::vector<double> p(count);
  for (int i = 0; i < count; ++i) p[i] = p_min + (p_max - p_min) * i / (count - 1);
  return p;
}

SweepResult monte_carlo_sweep(const QuantumState& base, const SweepConfig& cfg) {
  check_three_qubits(base, "monte_carlo_sweep");
  if (cfg.p_values.empty()) throw std::invalid_argument("monte_carlo_sweep: no p values");
  for (double p : cfg.p_values)
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("monte_carlo_sweep: p values must lie in [0,1]");
  if (cfg.samples_per_p < 1)
    throw std::invalid_argument("monte_carlo_sweep: samples_per_p must be >= 1");
  if (!(cfg.intensity > 0.0))
    throw std::invalid_argument("monte_carlo_sweep: intensity must be positive");
  if (cfg.threads < 1) throw std::invalid_argument("monte_carlo_sweep: threads must be >= 1");

  const Bipartition cut_a_bc({0}, {1, 2});
  const Bipartition cut_b_ac({1}, {0, 2});
  const Bipartition cut_c_ab({2}, {0, 1});

  const int num_p = static_cast<int>(cfg.p_values.size());
  const int samples = cfg.samples_per_p;
  std::vector<QuantumState> targets;
  targets.reserve(num_p);
  for (double p : cfg.p_values) targets.push_back(add_white_noise(base, {p}));

  const int total = num_p * samples;
  std::vector<double> eig_a(total), eig_b(total), eig_c(total), fid(total);
  std::vector<char> success(total);

  // Each flattened job owns its RNG stream via (p index, sample index), so
  // any partition of the index range yields identical per-slot results.
  auto run_range = [&](int lo, int hi) {
    for (int idx = lo; idx < hi; ++idx) {
      const int pi = idx / samples;
      const int si = idx % samples;
      const CountsTable counts =
          simulate_counts(targets[pi], cfg.intensity, derive_seed(cfg.seed, pi, si));
      const QuantumState recon = mle_reconstruct(counts, cfg.mle);
      const double a = min_eigenvalue(partial_transpose(recon, cut_a_bc));
      const double b = min_eigenvalue(partial_transpose(recon, cut_b_ac));
      const double c = min_eigenvalue(partial_transpose(recon, cut_c_ab));
      eig_a[idx] = a;
      eig_b[idx] = b;
      eig_c[idx] = c;
      fid[idx] = fidelity(recon, base);
      success[idx] = (a < 0.0 && b > 0.0 && c > 0.0) ? 1 : 0;
    }
  };

  const int threads = std::min(cfg.threads, total);
  if (threads <= 1) {
    run_range(0, total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      const int lo = static_cast<int>(static_cast<long long>(total) * t / threads);
      const int hi = static_cast<int>(static_cast<long long>(total) * (t + 1) / threads);
      pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& t : pool) t.join();
  }

  SweepResult result{cfg, {}};
  result.rows.reserve(num_p);
  for (int pi = 0; pi < num_p; ++pi) {
    SweepRow row;
    row.p = cfg.p_values[pi];
    row.n_samples = samples;
    auto slice = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + pi * samples, v.begin() + (pi + 1) * samples);
    };
    row.a_bc = aggregate(slice(eig_a));
    row.b_ac = aggregate(slice(eig_b));
    row.c_ab = aggregate(slice(eig_c));
    row.fidelity = aggregate(slice(fid));
    const QuantumState noiseless =
        mle_reconstruct(expected_counts(targets[pi], cfg.intensity), cfg.mle);
    row.fidelity_noiseless = fidelity(noiseless, base);
    int hits = 0;
    for (int si = 0; si < samples; ++si) hits += success[pi * samples + si];
    row.success_proportion = static_cast<double>(hits) / samples;
    result.rows.push_back(row);
  }
  return result;
}

void SweepResult::write_csv(std::ostream& os) const {
  os << "# entdist sweep\n";
  os << "# seed=" << config.seed << '\n';
  os << "# samples_per_p=" << config.samples_per_p << '\n';
  os << "# intensity=";
  format_double(os, config.intensity);
  os << '\n';
  os << "# mle_max_iterations=" << config.mle.max_iterations << '\n';
  os << "# mle_convergence_tol=";
  format_double(os, config.mle.convergence_tol);
  os << '\n';
  os << "# mle_min_dilution=";
  format_double(os, config.mle.min_dilution);
  os << '\n';
  os << "p,n_samples"
     << ",a_bc_mean,a_bc_std,a_bc_q05,a_bc_q95"
     << ",b_ac_mean,b_ac_std,b_ac_q05,b_ac_q95"
     << ",c_ab_mean,c_ab_std,c_ab_q05,c_ab_q95"
     << ",fid_mean,fid_std,fid_q05,fid_q95"
     << ",fid_noiseless,success_proportion\n";
  for (const SweepRow& row : rows) {
    format_double(os, row.p);
    os << ',' << row.n_samples;
    for (const SampleStats* st : {&row.a_bc, &row.b_ac, &row.c_ab, &row.fidelity})
      for (double x : {st->mean, st->stddev, st->q05, st->q95}) {
        os << ',';
        format_double(os, x);
      }
    os << ',';
    format_double(os, row.fidelity_noiseless);
    os << ',';
    format_double(os, row.success_proportion);
    os << '\n';
  }
}

nlohmann::json SweepResult::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    auto stats = [](const SampleStats& st) {
      return nlohmann::json{
          {"mean", st.mean}, {"std", st.stddev}, {"q05", st.q05}, {"q95", st.q95}};
    };
    rows_json.push_back(nlohmann::json{{"p", row.p},
                                       {"n_samples", row.n_samples},
                                       {"a_bc", stats(row.a_bc)},
                                       {"b_ac", stats(row.b_ac)},
                                       {"c_ab", stats(row.c_ab)},
                                       {"fidelity", stats(row.fidelity)},
                                       {"fidelity_noiseless", row.fidelity_noiseless},
                                       {"success_proportion", row.success_proportion}});
  }
  // The thread count is an execution detail with no effect on results, so it
  // is deliberately not part of the embedded config.
  return nlohmann::json{{"config",
                         {{"seed", config.seed},
                          {"p_values", config.p_values},
                          {"samples_per_p", config.samples_per_p},
                          {"intensity", config.intensity},
                          {"mle",
                           {{"max_iterations", config.mle.max_iterations},
                            {"convergence_tol", config.mle.convergence_tol},
                            {"min_dilution", config.mle.min_dilution}}}}},
                        {"rows", std::move(rows_json)}};
}

}  // namespace entdist
