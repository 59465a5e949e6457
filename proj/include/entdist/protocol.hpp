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

#include "entdist/qstate.hpp"

// Construction of the entanglement-distribution protocol states: the
// discorded two-qubit source state, the coherent carrier qubit, the
// controlled-phase step that entangles the A|BC cut while keeping the
// carrier separable, and white-noise admixture.
namespace entdist {

// Probabilities of the four Bell states in a Bell-diagonal mixture.
struct BellMixture {
  double p_phi_plus = 0.0;
  double p_phi_minus = 0.0;
  double p_psi_plus = 0.0;
  double p_psi_minus = 0.0;

  double max_probability() const;
  void validate() const;  // each in [0,1], sum = 1 within 1e-12
};

// Carrier qubit parameter: alpha_C = (I + c_x * sigma_x) / 2.
struct CarrierParams {
  double c_x = -0.5;
};

// White-noise admixture weight.
struct NoiseParam {
  double p = 0.0;
};

// Single-qubit polarization kets (H -> |0>, V -> |1>).
CVector ket_h();
CVector ket_v();
CVector ket_d();
CVector ket_a();
CVector ket_r();  // right circular, sigma_y eigenvalue +1
CVector ket_l();  // left circular, sigma_y eigenvalue -1

// Two-qubit Bell kets and the phi^{+-i} = (|00> +- i|11>)/sqrt(2) pair.
CVector ket_phi_plus();
CVector ket_phi_minus();
CVector ket_psi_plus();
CVector ket_psi_minus();
CVector ket_phi_plus_i();
CVector ket_phi_minus_i();

// The two-qubit source state: an equal-z, half-weight-x/y mixture of Pauli
// eigenstate pairs. Separable by construction, with maximal Bell weight 1/2.
QuantumState build_alpha_ab();

// Carrier state (I + c_x sigma_x)/2; throws if |c_x| > 1.
QuantumState build_alpha_c(CarrierParams params);

// Bell-diagonal state from mixture probabilities.
QuantumState bell_mixture(const BellMixture& m);

// Separability of a Bell-diagonal mixture: max probability <= 1/2.
bool is_separable(const BellMixture& m);

// Conjugation by the controlled-phase gate diag(1,1,1,-1) on the given
// qubit pair; identity elsewhere. Throws if the subsystems are not distinct
// qubits.
QuantumState cphase(const QuantumState& s, int control, int target);

// cphase(tensor(build_alpha_ab(), build_alpha_c({-1/2})), A, C).
QuantumState build_beta();

// (1-p) * s + (p/dim) * identity; throws unless p in [0,1].
QuantumState add_white_noise(const QuantumState& s, NoiseParam noise);

}  // namespace entdist
