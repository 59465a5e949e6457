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
#include <variant>

#include <nlohmann/json.hpp>

#include "entdist/protocol.hpp"
#include "entdist/separability.hpp"
#include "testutil.hpp"

using namespace entdist;
using testutil::max_abs_diff;

namespace {

const Bipartition kCutCAB = Bipartition::parse("C|AB");
const std::vector<int> kQubits{2, 2, 2};

Certificate expect_certificate(CertifyResult r) {
  REQUIRE(std::holds_alternative<Certificate>(r));
  return std::get<Certificate>(std::move(r));
}

CertifyFailure expect_failure(CertifyResult r) {
  REQUIRE(std::holds_alternative<CertifyFailure>(r));
  return std::get<CertifyFailure>(std::move(r));
}

}  // namespace

TEST_CASE("the twelve-entry dictionary reconstructs the output state exactly") {
  const Dictionary d = seed_dictionary_ideal();
  REQUIRE(d.size() == 12);
  CHECK(d.left_dim() == 2);
  CHECK(d.right_dim() == 4);

  const std::vector<double> w = ideal_weights();
  REQUIRE(w.size() == 12);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  Certificate cert{d.entries(), w, 0.0, 0.0, 1e-12, kCutCAB, d.seed()};
  const QuantumState beta = build_beta();
  const CMatrix recon = certificate_reconstruction(cert, kQubits);
  CHECK(max_abs_diff(recon, beta.matrix()) < 1e-15);

  std::vector<std::string> reasons;
  CHECK(verify_certificate(cert, beta, &reasons));
  CHECK(reasons.empty());
}

TEST_CASE("solver recovers the unique weights on the twelve-entry dictionary") {
  const QuantumState beta = build_beta();
  const Certificate cert =
      expect_certificate(certify_separable(beta, kCutCAB, seed_dictionary_ideal(), 1e-10));
  CHECK(cert.residual_max <= 1e-12);
  REQUIRE(cert.weights.size() == 12);  // nothing pruned: every weight >= 1/32
  const std::vector<double> w = ideal_weights();
  for (size_t j = 0; j < 12; ++j) CHECK(cert.weights[j] == doctest::Approx(w[j]).epsilon(1e-8));
  CHECK(verify_certificate(cert, beta));
}

TEST_CASE("maximally mixed state decomposes over computational products") {
  const QuantumState mixed(CMatrix::Identity(8, 8) / 8.0, kQubits);
  const Certificate cert = expect_certificate(
      certify_separable(mixed, kCutCAB, computational_dictionary(2, 4), 1e-10));
  CHECK(cert.residual_max <= 1e-12);
  REQUIRE(cert.weights.size() == 8);
  for (double w : cert.weights) CHECK(w == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(verify_certificate(cert, mixed));
}

TEST_CASE("noisy output states are certified over an extended dictionary") {
  const QuantumState beta = build_beta();
  const Dictionary d = extend_dictionary(seed_dictionary_ideal(), 3000, 2024);
  REQUIRE(d.size() == 3012);
  for (const double p : {1.0 / 6.0, 1.0 / 3.0}) {
    const QuantumState noisy = add_white_noise(beta, {.p = p});
    const Certificate cert = expect_certificate(certify_separable(noisy, kCutCAB, d, 1e-6));
    CHECK(cert.residual_max <= 1e-6);
    std::vector<std::string> reasons;
    CHECK(verify_certificate(cert, noisy, &reasons));
    CHECK(reasons.empty());
    // Pruned weights stay a convex combination.
    double sum = 0.0;
    for (double w : cert.weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("dictionary extension is deterministic and prefix-stable") {
  const Dictionary base = seed_dictionary_ideal();
  const Dictionary d1 = extend_dictionary(base, 100, 7);
  const Dictionary d2 = extend_dictionary(base, 100, 7);
  REQUIRE(d1.size() == d2.size());
  CHECK(d1.seed() == 7);
  for (int j = 0; j < d1.size(); ++j) {
    CHECK((d1.entries()[j].left_vector - d2.entries()[j].left_vector).norm() == 0.0);
    CHECK((d1.entries()[j].right_vector - d2.entries()[j].right_vector).norm() == 0.0);
  }

  // Same seed, longer extension: the first entries coincide.
  const Dictionary d3 = extend_dictionary(base, 250, 7);
  for (int j = 0; j < d1.size(); ++j)
    CHECK((d1.entries()[j].right_vector - d3.entries()[j].right_vector).norm() == 0.0);

  // Different seed: different entries.
  const Dictionary d4 = extend_dictionary(base, 100, 8);
  CHECK((d1.entries()[12].right_vector - d4.entries()[12].right_vector).norm() > 1e-3);

  // Zero extension returns the dictionary unchanged.
  const Dictionary d5 = extend_dictionary(base, 0, 99);
  CHECK(d5.size() == base.size());
  CHECK(d5.seed() == base.seed());
  CHECK_THROWS_AS(extend_dictionary(base, -1, 7), std::invalid_argument);
}

TEST_CASE("random factors have the Haar reduced-purity average") {
  // For a Haar-random pure state on 2 x 2, the expected purity of a one-qubit
  // reduction is (2 + 2) / (2 * 2 + 1) = 4/5.
  const int n = 20000;
  const Dictionary d = extend_dictionary(Dictionary(2, 4), n, 31337);
  double sum = 0.0, sumsq = 0.0;
  for (int j = 0; j < n; ++j) {
    const CVector& v = d.entries()[j].right_vector;
    Eigen::Matrix2cd red = Eigen::Matrix2cd::Zero();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        for (int t = 0; t < 2; ++t) red(r, c) += v(2 * r + t) * std::conj(v(2 * c + t));
    const double purity = (red * red).trace().real();
    sum += purity;
    sumsq += purity * purity;
  }
  const double mean = sum / n;
  const double var = (sumsq - n * mean * mean) / (n - 1);
  const double se = std::sqrt(var / n);
  CHECK(std::abs(mean - 0.8) < 4.0 * se);
}

TEST_CASE("residual is monotone nonincreasing in the dictionary size") {
  const QuantumState target = add_white_noise(build_beta(), {.p = 0.2});
  double previous = std::numeric_limits<double>::infinity();
  for (const int n : {50, 200, 800}) {
    const Dictionary d = extend_dictionary(seed_dictionary_ideal(), n, 5);
    // A tolerance below reachable accuracy forces the best-effort path.
    const CertifyFailure f = expect_failure(certify_separable(target, kCutCAB, d, 1e-18));
    CHECK(f.best_residual_max <= previous + 1e-10);
    previous = f.best_residual_max;
  }
}

TEST_CASE("entangled targets are never certified") {
  const QuantumState beta = build_beta();
  // The output state is entangled across A|BC; the solver must fail there.
  const Dictionary d_abc = extend_dictionary(Dictionary(2, 4), 500, 11);
  const CertifyFailure f =
      expect_failure(certify_separable(beta, Bipartition::parse("A|BC"), d_abc, 1e-6));
  CHECK(f.best_residual_max > 1e-6);
  CHECK_FALSE(f.message.empty());

  Rng rng(61);
  const Dictionary d = extend_dictionary(seed_dictionary_ideal(), 400, 13);
  for (int trial = 0; trial < 10; ++trial) {
    const QuantumState target = testutil::random_npt_state(kQubits, kCutCAB, rng, -1e-3);
    expect_failure(certify_separable(target, kCutCAB, d, 1e-6));
  }
}

TEST_CASE("verifier rejects tampered certificates") {
  const QuantumState beta = build_beta();
  const Certificate good =
      expect_certificate(certify_separable(beta, kCutCAB, seed_dictionary_ideal(), 1e-10));
  REQUIRE(verify_certificate(good, beta));

  std::vector<std::string> reasons;

  Certificate negative = good;
  negative.weights[0] = -negative.weights[0];
  CHECK_FALSE(verify_certificate(negative, beta, &reasons));
  CHECK_FALSE(reasons.empty());

  Certificate unnormalized = good;
  unnormalized.weights[0] += 0.01;
  CHECK_FALSE(verify_certificate(unnormalized, beta));

  Certificate wrong_residual = good;
  wrong_residual.residual_max += 1e-3;
  CHECK_FALSE(verify_certificate(wrong_residual, beta));

  Certificate non_unit = good;
  non_unit.entries[0].left_vector *= 1.1;
  CHECK_FALSE(verify_certificate(non_unit, beta));

  // Right certificate, wrong target.
  const QuantumState other = add_white_noise(beta, {.p = 0.5});
  CHECK_FALSE(verify_certificate(good, other));

  Certificate empty = good;
  empty.entries.clear();
  empty.weights.clear();
  CHECK_FALSE(verify_certificate(empty, beta));
}

TEST_CASE("certificates survive a JSON round trip") {
  const QuantumState noisy = add_white_noise(build_beta(), {.p = 1.0 / 6.0});
  const Dictionary d = extend_dictionary(seed_dictionary_ideal(), 600, 77);
  const Certificate cert = expect_certificate(certify_separable(noisy, kCutCAB, d, 1e-6));

  const nlohmann::json j = to_json(cert);
  const Certificate back = certificate_from_json(j);
  CHECK(back.cut == cert.cut);
  CHECK(back.tolerance == cert.tolerance);
  CHECK(back.dictionary_seed == cert.dictionary_seed);
  REQUIRE(back.weights.size() == cert.weights.size());
  for (size_t k = 0; k < back.weights.size(); ++k) CHECK(back.weights[k] == cert.weights[k]);
  CHECK(verify_certificate(back, noisy));
}

TEST_CASE("input validation") {
  const QuantumState beta = build_beta();
  const Dictionary d = seed_dictionary_ideal();
  CHECK_THROWS_AS(certify_separable(beta, kCutCAB, Dictionary(2, 4), 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(certify_separable(beta, kCutCAB, d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(certify_separable(beta, Bipartition::parse("AB|C"), d, 1e-6),
                  std::invalid_argument);  // dictionary factor dims are swapped for this cut
  CHECK_THROWS_AS(certify_separable(beta, Bipartition::parse("A|B"), d, 1e-6),
                  std::invalid_argument);

  Dictionary fresh(2, 4);
  CVector bad_left(3);
  bad_left << 1.0, 0.0, 0.0;
  CVector right = CVector::Zero(4);
  right(0) = 1.0;
  CHECK_THROWS_AS(fresh.append(ProductEntry{bad_left, right}), std::invalid_argument);
  CVector unnorm = CVector::Zero(2);
  unnorm(0) = 0.9;
  CHECK_THROWS_AS(fresh.append(ProductEntry{unnorm, right}), std::invalid_argument);
  CHECK_THROWS_AS(Dictionary(0, 4), std::invalid_argument);
}
