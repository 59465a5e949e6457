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

#include "entdist/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace entdist {

namespace {

using Axis = std::array<double, 3>;

Axis angles_to_axis(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

CutReport cut_report(const QuantumState& s, const Bipartition& cut) {
  const double lambda = min_eigenvalue(partial_transpose(s, cut, Side::Left));
  return CutReport{cut, lambda, lambda >= -kPptTol};
}

double mutual_information(const QuantumState& s, const Bipartition& cut) {
  check_cut(cut, s.dims());
  const double s_left = von_neumann_entropy(partial_trace(s, cut.left()));
  const double s_right = von_neumann_entropy(partial_trace(s, cut.right()));
  return s_left + s_right - von_neumann_entropy(s);
}

InfoReport eq1_report(const QuantumState& beta) {
  if (beta.num_subsystems() != 3)
    throw std::invalid_argument("eq1_report: expected a three-subsystem state");
  InfoReport r;
  r.i_final = mutual_information(beta, Bipartition({0}, {1, 2}));
  r.i_initial = mutual_information(beta, Bipartition({0, 2}, {1}));
  r.i_comm = mutual_information(beta, Bipartition({0, 1}, {2}));
  r.holds = r.i_final - r.i_initial <= r.i_comm + 1e-9;
  return r;
}

QuantumState measure_and_dephase(const QuantumState& s, int measured,
                                 const std::array<double, 3>& axis) {
  if (measured < 0 || measured >= s.num_subsystems() || s.dims()[measured] != 2)
    throw std::invalid_argument("measure_and_dephase: measured subsystem must be a qubit");
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("measure_and_dephase: axis must be a unit vector");
  Eigen::Matrix2cd p_plus;
  p_plus << 0.5 * (1.0 + axis[2]), 0.5 * Complex(axis[0], -axis[1]),
      0.5 * Complex(axis[0], axis[1]), 0.5 * (1.0 - axis[2]);
  const Eigen::Matrix2cd p_minus = Eigen::Matrix2cd::Identity() - p_plus;

  // Embed each projector at the measured position and conjugate.
  const auto& dims = s.dims();
  const int n = s.num_subsystems();
  CMatrix plus_full = CMatrix::Ones(1, 1), minus_full = CMatrix::Ones(1, 1);
  for (int q = 0; q < n; ++q) {
    const CMatrix eye = CMatrix::Identity(dims[q], dims[q]);
    plus_full = kron(plus_full, q == measured ? CMatrix(p_plus) : eye);
    minus_full = kron(minus_full, q == measured ? CMatrix(p_minus) : eye);
  }
  CMatrix m = plus_full * s.matrix() * plus_full + minus_full * s.matrix() * minus_full;
  // Round off asymmetry from the two matrix products.
  m = 0.5 * (m + m.adjoint()).eval();
  return QuantumState(std::move(m), dims, s.label());
}

DeficitResult one_way_deficit(const QuantumState& s, int measured, const DeficitOptions& options) {
  if (measured < 0 || measured >= s.num_subsystems() || s.dims()[measured] != 2)
    throw std::invalid_argument("one_way_deficit: measured subsystem must be a qubit");
  if (options.grid_points < 1 || options.value_tol <= 0.0 || options.max_refine_iterations < 0)
    throw std::invalid_argument("one_way_deficit: invalid search options");

  const double base = von_neumann_entropy(s);
  auto objective = [&](double theta, double phi) {
    return von_neumann_entropy(measure_and_dephase(s, measured, angles_to_axis(theta, phi)));
  };

  // Coarse pass: Fibonacci lattice on the upper hemisphere (antipodal axes
  // give the same projector pair, so half the sphere suffices).
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best_theta = 0.0, best_phi = 0.0;
  double best = objective(0.0, 0.0);
  for (int i = 1; i < options.grid_points; ++i) {
    const double z = 1.0 - static_cast<double>(i) / options.grid_points;  // (0, 1]
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phi = std::fmod(golden * i, 2.0 * std::numbers::pi);
    const double value = objective(theta, phi);
    if (value < best) {
      best = value;
      best_theta = theta;
      best_phi = phi;
    }
  }

  // Nelder-Mead refinement on (theta, phi).
  struct Point {
    double theta, phi, value;
  };
  auto eval = [&](double theta, double phi) { return Point{theta, phi, objective(theta, phi)}; };
  const double h = 0.1;
  std::array<Point, 3> simplex = {eval(best_theta, best_phi), eval(best_theta + h, best_phi),
                                  eval(best_theta, best_phi + h)};
  for (int it = 0; it < options.max_refine_iterations; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Point& a, const Point& b) { return a.value < b.value; });
    if (simplex[2].value - simplex[0].value < options.value_tol) break;
    const double ct = 0.5 * (simplex[0].theta + simplex[1].theta);
    const double cp = 0.5 * (simplex[0].phi + simplex[1].phi);
    Point reflected = eval(2.0 * ct - simplex[2].theta, 2.0 * cp - simplex[2].phi);
    if (reflected.value < simplex[0].value) {
      Point expanded = eval(3.0 * ct - 2.0 * simplex[2].theta, 3.0 * cp - 2.0 * simplex[2].phi);
      simplex[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < simplex[1].value) {
      simplex[2] = reflected;
    } else {
      Point contracted = eval(0.5 * (ct + simplex[2].theta), 0.5 * (cp + simplex[2].phi));
      if (contracted.value < simplex[2].value) {
        simplex[2] = contracted;
      } else {
        for (int k = 1; k < 3; ++k)
          simplex[k] = eval(0.5 * (simplex[0].theta + simplex[k].theta),
                            0.5 * (simplex[0].phi + simplex[k].phi));
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Point& a, const Point& b) { return a.value < b.value; });
  if (simplex[0].value < best) {
    best = simplex[0].value;
    best_theta = simplex[0].theta;
    best_phi = simplex[0].phi;
  }

  double value = best - base;
  if (value < -kPptTol)
    throw std::runtime_error("one_way_deficit: dephasing lowered the entropy (internal error)");
  value = std::max(value, 0.0);

  return DeficitResult{value, angles_to_axis(best_theta, best_phi)};
}

GainReport eq2_report(const QuantumState& beta, const DeficitOptions& options) {
  if (beta.num_subsystems() != 3)
    throw std::invalid_argument("eq2_report: expected a three-subsystem state");
  GainReport r;
  r.d_comm = one_way_deficit(beta, 2, options).value;
  r.n_a_bc = cut_report(beta, Bipartition({0}, {1, 2})).min_pt_eigenvalue;
  r.consistent = (r.n_a_bc >= -kPptTol) || (r.d_comm > kPptTol);
  return r;
}

nlohmann::json to_json(const CutReport& r) {
  return nlohmann::json{{"cut", r.cut.to_string()},
                        {"min_pt_eigenvalue", r.min_pt_eigenvalue},
                        {"is_ppt", r.is_ppt}};
}

nlohmann::json to_json(const InfoReport& r) {
  return nlohmann::json{{"i_final", r.i_final},
                        {"i_initial", r.i_initial},
                        {"i_comm", r.i_comm},
                        {"holds", r.holds}};
}

nlohmann::json to_json(const DeficitResult& r) {
  return nlohmann::json{
      {"value", r.value},
      {"optimal_axis", {r.optimal_axis[0], r.optimal_axis[1], r.optimal_axis[2]}}};
}

nlohmann::json to_json(const GainReport& r) {
  return nlohmann::json{{"d_comm", r.d_comm}, {"n_a_bc", r.n_a_bc}, {"consistent", r.consistent}};
}

}  // namespace entdist
