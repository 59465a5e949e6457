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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

// Dense linear-algebra kernels for multi-subsystem operators. All functions
// are pure and take Eigen expressions; subsystem index 0 is the most
// significant digit of the basis index (for qubits ABC the basis index is
// 4a + 2b + c).
namespace entdist {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline int product_dim(const std::vector<int>& dims) {
  int d = 1;
  for (int k : dims) d *= k;
  return d;
}

// Mixed-radix digits of a basis index, most significant subsystem first.
inline void index_digits(int index, const std::vector<int>& dims, std::vector<int>& out) {
  const int n = static_cast<int>(dims.size());
  out.resize(n);
  for (int q = n - 1; q >= 0; --q) {
    out[q] = index % dims[q];
    index /= dims[q];
  }
}

inline int digits_index(const std::vector<int>& digits, const std::vector<int>& dims) {
  int idx = 0;
  for (size_t q = 0; q < dims.size(); ++q) idx = idx * dims[q] + digits[q];
  return idx;
}

// Kronecker product, row-major subsystem ordering: (a ⊗ b) acts on the
// composite space with a's subsystems first.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Transpose the subsystems flagged in `transpose`, leaving the rest alone.
// A pure index permutation plus conjugation; applying it twice is exact.
template <typename Derived>
CMatrix partial_transpose(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& dims,
                          const std::vector<bool>& transpose) {
  const int d = product_dim(dims);
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("partial_transpose: matrix/dims size mismatch");
  if (transpose.size() != dims.size())
    throw std::invalid_argument("partial_transpose: mask/dims size mismatch");
  CMatrix out(d, d);
  std::vector<int> ri, ci, ro, co;
  for (int r = 0; r < d; ++r) {
    index_digits(r, dims, ri);
    for (int c = 0; c < d; ++c) {
      index_digits(c, dims, ci);
      ro = ri;
      co = ci;
      for (size_t q = 0; q < dims.size(); ++q)
        if (transpose[q]) std::swap(ro[q], co[q]);
      out(digits_index(ro, dims), digits_index(co, dims)) = m(r, c);
    }
  }
  return out;
}

// Trace out every subsystem not listed in `keep` (keep is sorted ascending).
template <typename Derived>
CMatrix partial_trace(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& dims,
                      const std::vector<int>& keep) {
  const int d = product_dim(dims);
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("partial_trace: matrix/dims size mismatch");
  std::vector<bool> kept(dims.size(), false);
  for (int q : keep) {
    if (q < 0 || q >= static_cast<int>(dims.size()) || kept[q])
      throw std::invalid_argument("partial_trace: invalid keep set");
    kept[q] = true;
  }
  std::vector<int> keep_dims, trace_dims;
  for (size_t q = 0; q < dims.size(); ++q)
    (kept[q] ? keep_dims : trace_dims).push_back(dims[q]);
  const int dk = product_dim(keep_dims);
  const int dt = product_dim(trace_dims);

  // Map (kept index, traced index) back to a full-space index.
  std::vector<int> kd, td, full(dims.size());
  auto full_index = [&](int k, int t) {
    index_digits(k, keep_dims, kd);
    index_digits(t, trace_dims, td);
    int ik = 0, it = 0;
    for (size_t q = 0; q < dims.size(); ++q) full[q] = kept[q] ? kd[ik++] : td[it++];
    return digits_index(full, dims);
  };

  CMatrix out = CMatrix::Zero(dk, dk);
  for (int r = 0; r < dk; ++r)
    for (int c = 0; c < dk; ++c)
      for (int t = 0; t < dt; ++t) out(r, c) += m(full_index(r, t), full_index(c, t));
  return out;
}

// Amplitudes of |l⟩ on subsystems `left` times |r⟩ on subsystems `right`,
// embedded at the original subsystem positions. left/right are sorted
// ascending and must partition 0..n-1.
inline CVector product_vector(const std::vector<int>& dims, const std::vector<int>& left,
                              const std::vector<int>& right, const CVector& l, const CVector& r) {
  std::vector<int> left_dims, right_dims;
  for (int q : left) left_dims.push_back(dims[q]);
  for (int q : right) right_dims.push_back(dims[q]);
  if (l.size() != product_dim(left_dims) || r.size() != product_dim(right_dims))
    throw std::invalid_argument("product_vector: factor dimension mismatch");
  const int d = product_dim(dims);
  CVector out(d);
  std::vector<int> digits, ld(left.size()), rd(right.size());
  for (int i = 0; i < d; ++i) {
    index_digits(i, dims, digits);
    for (size_t k = 0; k < left.size(); ++k) ld[k] = digits[left[k]];
    for (size_t k = 0; k < right.size(); ++k) rd[k] = digits[right[k]];
    out(i) = l(digits_index(ld, left_dims)) * r(digits_index(rd, right_dims));
  }
  return out;
}

inline double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
RVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
  return solver.eigenvalues();
}

// Shannon entropy in bits of a spectrum; 0·log 0 = 0 and small negative
// eigenvalues from floating-point noise are ignored.
inline double entropy_bits(const RVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return s;
}

// Principal square root of a positive semidefinite Hermitian matrix;
// eigenvalues below zero (numerical noise) are clamped.
inline CMatrix sqrt_psd(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sqrt_psd: eigensolver failed");
  RVector lambda = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace entdist
