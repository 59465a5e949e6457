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

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entdist/linalg.hpp"

namespace entdist {

// Numerical tolerances for the state invariants.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kRawTraceTol = 1e-8;
inline constexpr double kPsdTol = 1e-9;

// A two-way split of subsystem indices, e.g. {0} vs {1,2} for the A|BC cut
// of a three-qubit register. Both sides are kept sorted.
class Bipartition {
 public:
  Bipartition(std::vector<int> left, std::vector<int> right);

  const std::vector<int>& left() const { return left_; }
  const std::vector<int>& right() const { return right_; }
  int num_subsystems() const { return static_cast<int>(left_.size() + right_.size()); }

  // Accepts "A|BC" style letters (A=0, B=1, C=2, ...) or digit lists "0|12".
  static Bipartition parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const Bipartition& other) const = default;

 private:
  std::vector<int> left_, right_;
};

// Density matrix together with its tensor-factor structure. Construction
// enforces hermiticity, unit trace and positivity, so a QuantumState is
// always physical.
class QuantumState {
 public:
  QuantumState(CMatrix matrix, std::vector<int> dims, std::string label = "");

  const CMatrix& matrix() const { return matrix_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }

 private:
  CMatrix matrix_;
  std::vector<int> dims_;
  std::string label_;
};

// Hermitian, trace-one matrix whose spectrum is unconstrained. Holds partial
// transposes and linear-inversion tomography outputs, which may be negative.
class RawMatrix {
 public:
  RawMatrix(CMatrix matrix, std::vector<int> dims);

  const CMatrix& matrix() const { return matrix_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  CMatrix matrix_;
  std::vector<int> dims_;
};

enum class Side { Left, Right };

// Kronecker product of two states; result dims are a's dims followed by b's.
QuantumState tensor(const QuantumState& a, const QuantumState& b);

// Transpose one side of the cut. Throws if the cut does not match the
// state's subsystems.
RawMatrix partial_transpose(const QuantumState& s, const Bipartition& cut,
                            Side side = Side::Left);
RawMatrix partial_transpose(const RawMatrix& m, const Bipartition& cut, Side side = Side::Left);

// Reduce to the subsystems in `keep` (original order preserved).
QuantumState partial_trace(const QuantumState& s, const std::vector<int>& keep);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const RawMatrix& m);
double min_eigenvalue(const QuantumState& s);

// Von Neumann entropy in bits.
double von_neumann_entropy(const QuantumState& s);

// Uhlmann fidelity F = (tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
double fidelity(const QuantumState& a, const QuantumState& b);

// JSON matrix exchange format: {"dims":[...], "re":[[..]], "im":[[..]]}.
nlohmann::json matrix_to_json(const CMatrix& m, const std::vector<int>& dims);
nlohmann::json to_json(const QuantumState& s);
nlohmann::json to_json(const RawMatrix& m);
QuantumState state_from_json(const nlohmann::json& j);
RawMatrix raw_from_json(const nlohmann::json& j);

// Throws unless `cut` partitions exactly the subsystems of `dims`.
void check_cut(const Bipartition& cut, const std::vector<int>& dims);

}  // namespace entdist
