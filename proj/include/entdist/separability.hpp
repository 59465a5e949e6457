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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entdist/qstate.hpp"

// Separability certification: build an explicit convex decomposition of a
// target state into pure product states across a cut, and verify such
// certificates independently of the solver. Failing to find a decomposition
// proves nothing (the general problem is hard); only a verified certificate
// is a positive statement.
namespace entdist {

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kWeightSumTol = 1e-9;
inline constexpr double kWeightPruneTol = 1e-12;

// A pure product state across a cut, stored as its two factors. Vectors are
// unit-norm within kUnitNormTol.
struct ProductEntry {
  CVector left_vector;   // on the cut's left factor space
  CVector right_vector;  // on the cut's right factor space
};

// A pool of candidate product states for one cut, identified by the factor
// dimensions and the seed of the last random extension.
class Dictionary {
 public:
  Dictionary(int left_dim, int right_dim, std::uint64_t seed = 0);

  void append(ProductEntry entry);  // validates factor dims and unit norms

  const std::vector<ProductEntry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int left_dim() const { return left_dim_; }
  int right_dim() const { return right_dim_; }
  std::uint64_t seed() const { return seed_; }

 private:
  friend Dictionary extend_dictionary(Dictionary d, int n, std::uint64_t rng_seed);
  std::vector<ProductEntry> entries_;
  int left_dim_, right_dim_;
  std::uint64_t seed_;
};

// The twelve-term exact decomposition of the carrier-exchange output state
// across C|AB (left factor C, right factor AB), in print order:
// |HH>|A>, |VV>|D>, |phi+>|H>, |phi->|V>, |HV>|A>, |VH>|D>,
// |phi+i>|L>, |phi-i>|R>, |HV>|L>, |VH>|L>, |psi+>|R>, |psi->|R>.
Dictionary seed_dictionary_ideal();

// The weights matching seed_dictionary_ideal(), in the same order:
// (3/16, 3/16, 1/8, 1/8, 1/16, 1/16, 1/16, 1/16, 1/32, 1/32, 1/32, 1/32).
std::vector<double> ideal_weights();

// All left-basis x right-basis computational products (left_dim * right_dim
// entries); enough to decompose any state that is diagonal in the product
// computational basis, e.g. the maximally mixed state.
Dictionary computational_dictionary(int left_dim, int right_dim);

// Appends n entries whose factors are drawn independently from the
// rotation-invariant (Haar) measure on pure states. Deterministic given
// rng_seed; the result records rng_seed as its seed.
Dictionary extend_dictionary(Dictionary d, int n, std::uint64_t rng_seed);

// An explicit convex decomposition of a target across a cut. The residuals
// refer to the pruned entry list exactly as stored: residual_max is the
// entrywise max-norm of (reconstruction - target) and is the acceptance
// quantity; residual_l2 is the Frobenius norm the solver minimizes.
struct Certificate {
  std::vector<ProductEntry> entries;
  std::vector<double> weights;
  double residual_max = 0.0;
  double residual_l2 = 0.0;
  double tolerance = 0.0;  // max-norm acceptance threshold the solver used
  Bipartition cut;
  std::uint64_t dictionary_seed = 0;
};

// Best effort when no decomposition within tolerance was found.
struct CertifyFailure {
  double best_residual_max = 0.0;
  double best_residual_l2 = 0.0;
  std::string message;
};

using CertifyResult = std::variant<Certificate, CertifyFailure>;

// Minimizes || sum_j w_j P_j - target ||_F over weights w >= 0 with
// sum w = 1, where P_j is the product projector of dictionary entry j
// embedded across the cut. Returns a Certificate when the max-norm residual
// is <= tol, otherwise a CertifyFailure with the best residual reached.
// Weights below kWeightPruneTol are pruned from the certificate. Throws on
// an empty dictionary or mismatched dimensions.
CertifyResult certify_separable(const QuantumState& target, const Bipartition& cut,
                                const Dictionary& d, double tol);

// Rechecks a certificate from scratch, without the solver: weight
// nonnegativity and normalization, unit-norm product entries with the
// cut's factor dimensions, agreement of the stated residual with a fresh
// recomputation, and residual <= tolerance. Appends one line per violated
// check to *reasons when given.
bool verify_certificate(const Certificate& c, const QuantumState& target,
                        std::vector<std::string>* reasons = nullptr);

// Reconstruction sum_j w_j P_j of a certificate on the target dimensions.
CMatrix certificate_reconstruction(const Certificate& c, const std::vector<int>& dims);

nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CertifyFailure& f);

}  // namespace entdist
