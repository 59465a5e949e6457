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

#include "entdist/qstate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace entdist {

namespace {

void check_dims(const CMatrix& m, const std::vector<int>& dims) {
  if (m.rows() != m.cols()) throw std::invalid_argument("state matrix must be square");
  if (dims.empty()) throw std::invalid_argument("dims must be nonempty");
  for (int d : dims)
    if (d < 2) throw std::invalid_argument("every subsystem dimension must be >= 2");
  if (product_dim(dims) != m.rows())
    throw std::invalid_argument("product of dims must equal matrix dimension");
}

void check_hermitian_trace(const CMatrix& m, double trace_tol, const char* what) {
  if (hermiticity_error(m) > kHermTol)
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian within 1e-10");
  if (std::abs(m.trace().real() - 1.0) > trace_tol || std::abs(m.trace().imag()) > trace_tol)
    throw std::invalid_argument(std::string(what) + ": trace is not 1 within tolerance");
}

std::vector<bool> side_mask(const Bipartition& cut, Side side, size_t n) {
  std::vector<bool> mask(n, false);
  for (int q : (side == Side::Left ? cut.left() : cut.right())) mask[q] = true;
  return mask;
}

}  // namespace

Bipartition::Bipartition(std::vector<int> left, std::vector<int> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.empty() || right_.empty())
    throw std::invalid_argument("bipartition sides must be nonempty");
  std::sort(left_.begin(), left_.end());
  std::sort(right_.begin(), right_.end());
  std::vector<int> all;
  std::merge(left_.begin(), left_.end(), right_.begin(), right_.end(), std::back_inserter(all));
  for (size_t i = 0; i + 1 < all.size(); ++i)
    if (all[i] == all[i + 1]) throw std::invalid_argument("bipartition sides must be disjoint");
}

Bipartition Bipartition::parse(const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("bipartition must contain '|': " + text);
  bool saw_letter = false, saw_digit = false;
  auto side = [&](const std::string& part) {
    std::vector<int> idx;
    for (char ch : part) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if (ch >= '0' && ch <= '9') {
        saw_digit = true;
        idx.push_back(ch - '0');
      } else if (std::isalpha(static_cast<unsigned char>(ch))) {
        saw_letter = true;
        idx.push_back(std::toupper(static_cast<unsigned char>(ch)) - 'A');
      } else {
        throw std::invalid_argument("bad bipartition character in: " + part);
      }
    }
    return idx;
  };
  std::vector<int> left = side(text.substr(0, bar));
  std::vector<int> right = side(text.substr(bar + 1));
  if (saw_letter && saw_digit)
    throw std::invalid_argument("bipartition mixes letter and digit notation: " + text);
  return Bipartition(std::move(left), std::move(right));
}

std::string Bipartition::to_string() const {
  auto letters = [](const std::vector<int>& v) {
    std::string s;
    for (int q : v) s += static_cast<char>('A' + q);
    return s;
  };
  return letters(left_) + "|" + letters(right_);
}

void check_cut(const Bipartition& cut, const std::vector<int>& dims) {
  std::vector<int> all;
  all.reserve(cut.left().size() + cut.right().size());
  std::merge(cut.left().begin(), cut.left().end(), cut.right().begin(), cut.right().end(),
             std::back_inserter(all));
  std::vector<int> expected(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) expected[i] = static_cast<int>(i);
  if (all != expected)
    throw std::invalid_argument("bipartition " + cut.to_string() +
                                " does not match the state's subsystems");
}

QuantumState::QuantumState(CMatrix matrix, std::vector<int> dims, std::string label)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), label_(std::move(label)) {
  check_dims(matrix_, dims_);
  check_hermitian_trace(matrix_, kTraceTol, "QuantumState");
  if (hermitian_eigenvalues(matrix_).minCoeff() < -kPsdTol)
    throw std::invalid_argument("QuantumState: matrix has a negative eigenvalue; use RawMatrix");
}

RawMatrix::RawMatrix(CMatrix matrix, std::vector<int> dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  check_dims(matrix_, dims_);
  check_hermitian_trace(matrix_, kRawTraceTol, "RawMatrix");
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::string label;
  if (!a.label().empty() && !b.label().empty()) label = a.label() + "⊗" + b.label();
  return QuantumState(kron(a.matrix(), b.matrix()), std::move(dims), std::move(label));
}

RawMatrix partial_transpose(const QuantumState& s, const Bipartition& cut, Side side) {
  check_cut(cut, s.dims());
  return RawMatrix(partial_transpose(s.matrix(), s.dims(), side_mask(cut, side, s.dims().size())),
                   s.dims());
}

RawMatrix partial_transpose(const RawMatrix& m, const Bipartition& cut, Side side) {
  check_cut(cut, m.dims());
  return RawMatrix(partial_transpose(m.matrix(), m.dims(), side_mask(cut, side, m.dims().size())),
                   m.dims());
}

QuantumState partial_trace(const QuantumState& s, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> kept_dims;
  for (int q : sorted) {
    if (q < 0 || q >= s.num_subsystems())
      throw std::invalid_argument("partial_trace: subsystem index out of range");
    kept_dims.push_back(s.dims()[q]);
  }
  return QuantumState(partial_trace(s.matrix(), s.dims(), sorted), std::move(kept_dims));
}

double min_eigenvalue(const RawMatrix& m) { return hermitian_eigenvalues(m.matrix()).minCoeff(); }

double min_eigenvalue(const QuantumState& s) {
  return hermitian_eigenvalues(s.matrix()).minCoeff();
}

double von_neumann_entropy(const QuantumState& s) {
  return entropy_bits(hermitian_eigenvalues(s.matrix()));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dims() != b.dims())
    throw std::invalid_argument("fidelity: states have different subsystem dimensions");
  const CMatrix sqrt_a = sqrt_psd(a.matrix());
  const RVector lambda = hermitian_eigenvalues(sqrt_a * b.matrix() * sqrt_a).cwiseMax(0.0);
  const double root_sum = lambda.cwiseSqrt().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

nlohmann::json matrix_to_json(const CMatrix& m, const std::vector<int>& dims) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return nlohmann::json{{"dims", dims}, {"re", std::move(re)}, {"im", std::move(im)}};
}

nlohmann::json to_json(const QuantumState& s) {
  nlohmann::json j = matrix_to_json(s.matrix(), s.dims());
  if (!s.label().empty()) j["label"] = s.label();
  return j;
}

nlohmann::json to_json(const RawMatrix& m) { return matrix_to_json(m.matrix(), m.dims()); }

namespace {

std::pair<CMatrix, std::vector<int>> matrix_from_json(const nlohmann::json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int d = product_dim(dims);
  if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
    throw std::invalid_argument("matrix JSON: row count does not match dims");
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(re[r].size()) != d || static_cast<int>(im[r].size()) != d)
      throw std::invalid_argument("matrix JSON: column count does not match dims");
    for (int c = 0; c < d; ++c) {
      const double x = re[r][c].get<double>();
      const double y = im[r][c].get<double>();
      if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("matrix JSON: entries must be finite");
      m(r, c) = Complex(x, y);
    }
  }
  return {std::move(m), dims};
}

}  // namespace

QuantumState state_from_json(const nlohmann::json& j) {
  auto [m, dims] = matrix_from_json(j);
  return QuantumState(std::move(m), std::move(dims), j.value("label", ""));
}

RawMatrix raw_from_json(const nlohmann::json& j) {
  auto [m, dims] = matrix_from_json(j);
  return RawMatrix(std::move(m), std::move(dims));
}

}  // namespace entdist
