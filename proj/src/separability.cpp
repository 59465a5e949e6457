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

#include "entdist/separability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "entdist/protocol.hpp"
#include "entdist/random.hpp"

namespace entdist {

namespace {

// Isometric real coordinates of a Hermitian matrix (Frobenius norm equals
// Euclidean norm of the coordinates): diagonal first, then sqrt(2) * (Re, Im)
// of each strict upper-triangle entry.
RVector vec_hermitian(const CMatrix& m) {
  const int d = static_cast<int>(m.rows());
  RVector out(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) out(k++) = m(i, i).real();
  const double s = std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      out(k++) = s * m(i, j).real();
      out(k++) = s * m(i, j).imag();
    }
  return out;
}

CMatrix entry_projector(const ProductEntry& e, const std::vector<int>& dims,
                        const Bipartition& cut) {
  const CVector full = product_vector(dims, cut.left(), cut.right(), e.left_vector, e.right_vector);
  return full * full.adjoint();
}

int factor_dim(const std::vector<int>& dims, const std::vector<int>& subs) {
  int d = 1;
  for (int q : subs) d *= dims[q];
  return d;
}

void check_entry_norms(const ProductEntry& e) {
  if (std::abs(e.left_vector.norm() - 1.0) > kUnitNormTol ||
      std::abs(e.right_vector.norm() - 1.0) > kUnitNormTol)
    throw std::invalid_argument("ProductEntry: factor vectors must be unit norm");
}

// Solves min ||A_P w - b|| over w supported on P with sum(w) = 1, where the
// equality constraint is eliminated through an orthonormal basis of the
// hyperplane sum = 0. The solution may have negative components; the caller
// enforces nonnegativity.
Eigen::VectorXd solve_equality_ls(const Eigen::MatrixXd& a, const std::vector<int>& p,
                                  const Eigen::VectorXd& b) {
  const int k = static_cast<int>(p.size());
  if (k == 1) return Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd ap(a.rows(), k);
  for (int i = 0; i < k; ++i) ap.col(i) = a.col(p[i]);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(k, 1));
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd z = q.rightCols(k - 1);  // orthonormal null space of 1^T

  const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(k, 1.0 / k);
  const Eigen::VectorXd y =
      (ap * z).completeOrthogonalDecomposition().solve(b - ap * w0);
  return w0 + z * y;
}

}  // namespace

Dictionary::Dictionary(int left_dim, int right_dim, std::uint64_t seed)
    : left_dim_(left_dim), right_dim_(right_dim), seed_(seed) {
  if (left_dim < 1 || right_dim < 1)
    throw std::invalid_argument("Dictionary: factor dimensions must be positive");
}

void Dictionary::append(ProductEntry entry) {
  if (entry.left_vector.size() != left_dim_ || entry.right_vector.size() != right_dim_)
    throw std::invalid_argument("Dictionary: entry factor dimensions mismatch");
  check_entry_norms(entry);
  entries_.push_back(std::move(entry));
}

Dictionary seed_dictionary_ideal() {
  Dictionary d(2, 4);
  auto add = [&d](const CVector& c_factor, const CVector& ab_factor) {
    d.append(ProductEntry{c_factor, ab_factor});
  };
  const CVector hh = kron(ket_h(), ket_h());
  const CVector hv = kron(ket_h(), ket_v());
  const CVector vh = kron(ket_v(), ket_h());
  const CVector vv = kron(ket_v(), ket_v());
  add(ket_a(), hh);
  add(ket_d(), vv);
  add(ket_h(), ket_phi_plus());
  add(ket_v(), ket_phi_minus());
  add(ket_a(), hv);
  add(ket_d(), vh);
  add(ket_l(), ket_phi_plus_i());
  add(ket_r(), ket_phi_minus_i());
  add(ket_l(), hv);
  add(ket_l(), vh);
  add(ket_r(), ket_psi_plus());
  add(ket_r(), ket_psi_minus());
  return d;
}

std::vector<double> ideal_weights() {
  return {3.0 / 16, 3.0 / 16, 1.0 / 8, 1.0 / 8, 1.0 / 16, 1.0 / 16,
          1.0 / 16, 1.0 / 16, 1.0 / 32, 1.0 / 32, 1.0 / 32, 1.0 / 32};
}

Dictionary computational_dictionary(int left_dim, int right_dim) {
  Dictionary d(left_dim, right_dim);
  for (int i = 0; i < left_dim; ++i)
    for (int j = 0; j < right_dim; ++j) {
      CVector l = CVector::Zero(left_dim), r = CVector::Zero(right_dim);
      l(i) = 1.0;
      r(j) = 1.0;
      d.append(ProductEntry{std::move(l), std::move(r)});
    }
  return d;
}

Dictionary extend_dictionary(Dictionary d, int n, std::uint64_t rng_seed) {
  if (n < 0) throw std::invalid_argument("extend_dictionary: n must be nonnegative");
  if (n == 0) return d;
  Rng rng(derive_seed(rng_seed, 0));
  for (int i = 0; i < n; ++i) {
    ProductEntry e{haar_unit_vector(d.left_dim(), rng), haar_unit_vector(d.right_dim(), rng)};
    d.entries_.push_back(std::move(e));
  }
  d.seed_ = rng_seed;
  return d;
}

CMatrix certificate_reconstruction(const Certificate& c, const std::vector<int>& dims) {
  const int d = product_dim(dims);
  CMatrix recon = CMatrix::Zero(d, d);
  for (size_t j = 0; j < c.entries.size(); ++j)
    recon += c.weights[j] * entry_projector(c.entries[j], dims, c.cut);
  return recon;
}

CertifyResult certify_separable(const QuantumState& target, const Bipartition& cut,
                                const Dictionary& d, double tol) {
  if (d.size() == 0) throw std::invalid_argument("certify_separable: empty dictionary");
  if (tol <= 0.0) throw std::invalid_argument("certify_separable: tolerance must be positive");
  check_cut(cut, target.dims());
  if (factor_dim(target.dims(), cut.left()) != d.left_dim() ||
      factor_dim(target.dims(), cut.right()) != d.right_dim())
    throw std::invalid_argument("certify_separable: dictionary factor dimensions mismatch");

  const int m = d.size();
  const int n = target.dim() * target.dim();
  Eigen::MatrixXd a(n, m);
  for (int j = 0; j < m; ++j)
    a.col(j) = vec_hermitian(entry_projector(d.entries()[j], target.dims(), cut));
  const Eigen::VectorXd b = vec_hermitian(target.matrix());

  // Active-set method for min ||a w - b||^2 with w >= 0, sum w = 1. The
  // support starts at the single closest column; at a restricted optimum the
  // gradient is constant (= mu) on the support, and any outside column with
  // gradient below mu gives a descent direction and enters.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  std::vector<char> active(m, 0);
  std::vector<int> support;
  {
    int best = 0;
    double best_dist = (a.col(0) - b).squaredNorm();
    for (int j = 1; j < m; ++j) {
      const double dist = (a.col(j) - b).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    support.push_back(best);
    active[best] = 1;
    w(best) = 1.0;
  }

  const int max_outer = 10 * m + 100;
  for (int outer = 0; outer < max_outer; ++outer) {
    // Restricted solve with nonnegativity restoration (move to the
    // constrained solution along a feasible segment, dropping blockers).
    Eigen::VectorXd z = solve_equality_ls(a, support, b);
    while (z.minCoeff() < -1e-12) {
      double alpha = 1.0;
      for (size_t i = 0; i < support.size(); ++i)
        if (z(i) < 1e-12) {
          const double wi = w(support[i]);
          alpha = std::min(alpha, wi / (wi - z(i)));
        }
      for (size_t i = 0; i < support.size(); ++i)
        w(support[i]) += alpha * (z(i) - w(support[i]));
      std::vector<int> kept;
      for (int j : support) {
        if (w(j) <= 1e-14) {
          w(j) = 0.0;
          active[j] = 0;
        } else {
          kept.push_back(j);
        }
      }
      support = std::move(kept);
      z = solve_equality_ls(a, support, b);
    }
    for (size_t i = 0; i < support.size(); ++i) w(support[i]) = std::max(z(i), 0.0);

    // Optimality test and entering column.
    Eigen::VectorXd residual = -b;
    for (int j : support) residual += w(j) * a.col(j);
    const Eigen::VectorXd g = a.transpose() * residual;
    double mu = 0.0;
    for (int j : support) mu += g(j);
    mu /= static_cast<double>(support.size());

    const double enter_tol = 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff());
    int enter = -1;
    double enter_value = mu - enter_tol;
    for (int j = 0; j < m; ++j)
      if (!active[j] && g(j) < enter_value) {
        enter_value = g(j);
        enter = j;
      }
    if (enter < 0) break;
    support.push_back(enter);
    active[enter] = 1;
  }

  // Assemble the pruned certificate in dictionary order and recompute the
  // reported residuals from exactly what is returned.
  Certificate cert{{}, {}, 0.0, 0.0, tol, cut, d.seed()};
  for (int j = 0; j < m; ++j)
    if (w(j) >= kWeightPruneTol) {
      cert.entries.push_back(d.entries()[j]);
      cert.weights.push_back(w(j));
    }
  const CMatrix diff = certificate_reconstruction(cert, target.dims()) - target.matrix();
  cert.residual_max = diff.cwiseAbs().maxCoeff();
  cert.residual_l2 = diff.norm();

  if (cert.residual_max <= tol) return cert;
  std::ostringstream msg;
  msg << "no decomposition within tolerance " << tol << " over " << m
      << " dictionary entries (best max-norm residual " << cert.residual_max << ")";
  return CertifyFailure{cert.residual_max, cert.residual_l2, msg.str()};
}

bool verify_certificate(const Certificate& c, const QuantumState& target,
                        std::vector<std::string>* reasons) {
  bool ok = true;
  auto fail = [&](const std::string& why) {
    ok = false;
    if (reasons) reasons->push_back(why);
  };

  if (c.entries.size() != c.weights.size()) {
    fail("entry/weight count mismatch");
    return false;
  }
  if (c.entries.empty()) {
    fail("certificate has no entries");
    return false;
  }
  try {
    check_cut(c.cut, target.dims());
  } catch (const std::exception& e) {
    fail(std::string("cut does not match target: ") + e.what());
    return false;
  }

  const int left_dim = factor_dim(target.dims(), c.cut.left());
  const int right_dim = factor_dim(target.dims(), c.cut.right());
  for (size_t j = 0; j < c.entries.size(); ++j) {
    const ProductEntry& e = c.entries[j];
    if (e.left_vector.size() != left_dim || e.right_vector.size() != right_dim) {
      fail("entry " + std::to_string(j) + ": factor dimensions mismatch");
      return false;
    }
    if (std::abs(e.left_vector.norm() - 1.0) > kUnitNormTol ||
        std::abs(e.right_vector.norm() - 1.0) > kUnitNormTol)
      fail("entry " + std::to_string(j) + ": factor not unit norm");
  }

  double sum = 0.0;
  for (size_t j = 0; j < c.weights.size(); ++j) {
    if (c.weights[j] < 0.0) fail("weight " + std::to_string(j) + " is negative");
    sum += c.weights[j];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) fail("weights do not sum to 1");

  const CMatrix diff = certificate_reconstruction(c, target.dims()) - target.matrix();
  const double residual_max = diff.cwiseAbs().maxCoeff();
  if (std::abs(residual_max - c.residual_max) > 1e-12)
    fail("stated residual disagrees with recomputation");
  if (residual_max > c.tolerance) {
    std::ostringstream msg;
    msg << "reconstruction residual " << residual_max << " exceeds tolerance " << c.tolerance;
    fail(msg.str());
  }
  return ok;
}

namespace {

nlohmann::json cvector_to_json(const CVector& v, const char* re_key, const char* im_key) {
  std::vector<double> re(v.size()), im(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re[i] = v(i).real();
    im[i] = v(i).imag();
  }
  return nlohmann::json{{re_key, re}, {im_key, im}};
}

CVector cvector_from_json(const nlohmann::json& j, const char* re_key, const char* im_key) {
  const auto re = j.at(re_key).get<std::vector<double>>();
  const auto im = j.at(im_key).get<std::vector<double>>();
  if (re.size() != im.size())
    throw std::invalid_argument("certificate JSON: re/im length mismatch");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  return v;
}

}  // namespace

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ProductEntry& e : c.entries) {
    nlohmann::json je = cvector_to_json(e.left_vector, "left_re", "left_im");
    const nlohmann::json jr = cvector_to_json(e.right_vector, "right_re", "right_im");
    je.update(jr);
    entries.push_back(std::move(je));
  }
  return nlohmann::json{{"type", "separability_certificate"},
                        {"cut", c.cut.to_string()},
                        {"tolerance", c.tolerance},
                        {"residual_max", c.residual_max},
                        {"residual_l2", c.residual_l2},
                        {"dictionary_seed", c.dictionary_seed},
                        {"weights", c.weights},
                        {"entries", std::move(entries)}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c{{},
                j.at("weights").get<std::vector<double>>(),
                j.at("residual_max").get<double>(),
                j.at("residual_l2").get<double>(),
                j.at("tolerance").get<double>(),
                Bipartition::parse(j.at("cut").get<std::string>()),
                j.at("dictionary_seed").get<std::uint64_t>()};
  for (const nlohmann::json& je : j.at("entries"))
    c.entries.push_back(ProductEntry{cvector_from_json(je, "left_re", "left_im"),
                                     cvector_from_json(je, "right_re", "right_im")});
  if (c.entries.size() != c.weights.size())
    throw std::invalid_argument("certificate JSON: entry/weight count mismatch");
  return c;
}

nlohmann::json to_json(const CertifyFailure& f) {
  return nlohmann::json{{"type", "separability_failure"},
                        {"best_residual_max", f.best_residual_max},
                        {"best_residual_l2", f.best_residual_l2},
                        {"message", f.message}};
}

}  // namespace entdist
