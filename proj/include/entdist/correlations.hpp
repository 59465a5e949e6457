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

#include <nlohmann/json_fwd.hpp>

#include "entdist/qstate.hpp"

// Entanglement and correlation measures: partial-transpose eigenvalue
// reports per cut, quantum mutual information, the one-way quantum deficit
// (relative entropy of discord under projective measurements), and the
// information/entanglement-gain report cards.
namespace entdist {

inline constexpr double kPptTol = 1e-9;

struct CutReport {
  Bipartition cut;
  double min_pt_eigenvalue = 0.0;
  bool is_ppt = false;
};

// Mutual-information bookkeeping for the information gain bound
// I_final - I_initial <= I_comm across the carrier exchange.
struct InfoReport {
  double i_final = 0.0;    // I_{A:CB}
  double i_initial = 0.0;  // I_{AC:B}
  double i_comm = 0.0;     // I_{AB:C}
  bool holds = false;      // i_final - i_initial <= i_comm + 1e-9
};

// Minimal entropy production over rank-1 projective measurements of one
// qubit, plus the minimizing Bloch axis.
struct DeficitResult {
  double value = 0.0;
  std::array<double, 3> optimal_axis{0.0, 0.0, 1.0};
};

// Necessary-condition check for the entanglement gain bound: entanglement
// created across A|BC must be accompanied by communicated discord. The
// exact relative entropy of entanglement is not evaluated; this check is
// meaningful for protocol states, which start with no entanglement across
// AC|B.
struct GainReport {
  double d_comm = 0.0;   // one-way deficit, measured on C
  double n_a_bc = 0.0;   // min PT eigenvalue across A|BC
  bool consistent = false;
};

// Search parameters for the deficit minimization: Fibonacci-lattice coarse
// grid over the Bloch hemisphere followed by Nelder-Mead refinement of the
// two spherical angles.
struct DeficitOptions {
  int grid_points = 2000;
  double value_tol = 1e-9;
  int max_refine_iterations = 500;
};

// Smallest eigenvalue of the partial transpose over the cut's left side.
CutReport cut_report(const QuantumState& s, const Bipartition& cut);

// S(rho_left) + S(rho_right) - S(rho), in bits.
double mutual_information(const QuantumState& s, const Bipartition& cut);

// Evaluates the information inequality on a three-qubit state ordered
// (A, B, C).
InfoReport eq1_report(const QuantumState& beta);

// Minimize S(sum_k Pi_k rho Pi_k) - S(rho) over rank-1 projective
// measurements {Pi_+-(axis)} of the given qubit.
DeficitResult one_way_deficit(const QuantumState& s, int measured,
                              const DeficitOptions& options = {});

GainReport eq2_report(const QuantumState& beta, const DeficitOptions& options = {});

// Dephase the measured qubit along the axis: sum of Pi rho Pi.
QuantumState measure_and_dephase(const QuantumState& s, int measured,
                                 const std::array<double, 3>& axis);

nlohmann::json to_json(const CutReport& r);
nlohmann::json to_json(const InfoReport& r);
nlohmann::json to_json(const DeficitResult& r);
nlohmann::json to_json(const GainReport& r);

}  // namespace entdist
