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

#include "entdist/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace entdist {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CVector ket2(Complex a0, Complex a1) {
  CVector v(2);
  v << a0, a1;
  return v;
}

CVector ket4(Complex a0, Complex a1, Complex a2, Complex a3) {
  CVector v(4);
  v << a0, a1, a2, a3;
  return v;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

}  // namespace

CVector ket_h() { return ket2(1.0, 0.0); }
CVector ket_v() { return ket2(0.0, 1.0); }
CVector ket_d() { return ket2(kInvSqrt2, kInvSqrt2); }
CVector ket_a() { return ket2(kInvSqrt2, -kInvSqrt2); }
CVector ket_r() { return ket2(kInvSqrt2, Complex(0.0, kInvSqrt2)); }
CVector ket_l() { return ket2(kInvSqrt2, Complex(0.0, -kInvSqrt2)); }

CVector ket_phi_plus() { return ket4(kInvSqrt2, 0.0, 0.0, kInvSqrt2); }
CVector ket_phi_minus() { return ket4(kInvSqrt2, 0.0, 0.0, -kInvSqrt2); }
CVector ket_psi_plus() { return ket4(0.0, kInvSqrt2, kInvSqrt2, 0.0); }
CVector ket_psi_minus() { return ket4(0.0, kInvSqrt2, -kInvSqrt2, 0.0); }
CVector ket_phi_plus_i() { return ket4(kInvSqrt2, 0.0, 0.0, Complex(0.0, kInvSqrt2)); }
CVector ket_phi_minus_i() { return ket4(kInvSqrt2, 0.0, 0.0, Complex(0.0, -kInvSqrt2)); }

double BellMixture::max_probability() const {
  return std::max(std::max(p_phi_plus, p_phi_minus), std::max(p_psi_plus, p_psi_minus));
}

void BellMixture::validate() const {
  for (double p : {p_phi_plus, p_phi_minus, p_psi_plus, p_psi_minus})
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("BellMixture: probabilities must lie in [0,1]");
  const double sum = p_phi_plus + p_phi_minus + p_psi_plus + p_psi_minus;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("BellMixture: probabilities must sum to 1");
}

QuantumState build_alpha_ab() {
  // 1/4 (|HH><HH| + |VV><VV|) + 1/8 (|DD><DD| + |AA><AA|)
  //   + 1/8 (|RL><RL| + |LR><LR|)
  CMatrix m = CMatrix::Zero(4, 4);
  m += 0.25 * projector(kron(ket_h(), ket_h()));
  m += 0.25 * projector(kron(ket_v(), ket_v()));
  m += 0.125 * projector(kron(ket_d(), ket_d()));
  m += 0.125 * projector(kron(ket_a(), ket_a()));
  m += 0.125 * projector(kron(ket_r(), ket_l()));
  m += 0.125 * projector(kron(ket_l(), ket_r()));
  return QuantumState(std::move(m), {2, 2}, "alpha_AB");
}

QuantumState build_alpha_c(CarrierParams params) {
  if (std::abs(params.c_x) > 1.0)
    throw std::invalid_argument("build_alpha_c: |c_x| > 1 is unphysical");
  CMatrix m(2, 2);
  m << 0.5, 0.5 * params.c_x, 0.5 * params.c_x, 0.5;
  return QuantumState(std::move(m), {2}, "alpha_C");
}

QuantumState bell_mixture(const BellMixture& mix) {
  mix.validate();
  CMatrix m = mix.p_phi_plus * projector(ket_phi_plus()) +
              mix.p_phi_minus * projector(ket_phi_minus()) +
              mix.p_psi_plus * projector(ket_psi_plus()) +
              mix.p_psi_minus * projector(ket_psi_minus());
  return QuantumState(std::move(m), {2, 2}, "bell_mixture");
}

bool is_separable(const BellMixture& mix) {
  mix.validate();
  return mix.max_probability() <= 0.5;
}

QuantumState cphase(const QuantumState& s, int control, int target) {
  const auto& dims = s.dims();
  const int n = s.num_subsystems();
  if (control < 0 || control >= n || target < 0 || target >= n)
    throw std::invalid_argument("cphase: subsystem index out of range");
  if (control == target) throw std::invalid_argument("cphase: control and target must differ");
  if (dims[control] != 2 || dims[target] != 2)
    throw std::invalid_argument("cphase: both subsystems must be qubits");

  // The gate is diagonal: basis state i picks up -1 iff both qubits are 1,
  // so conjugation is an elementwise sign flip.
  const int d = s.dim();
  RVector sign(d);
  std::vector<int> digits;
  for (int i = 0; i < d; ++i) {
    index_digits(i, dims, digits);
    sign(i) = (digits[control] == 1 && digits[target] == 1) ? -1.0 : 1.0;
  }
  CMatrix m = s.matrix();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) *= sign(r) * sign(c);
  return QuantumState(std::move(m), dims, s.label());
}

QuantumState build_beta() {
  QuantumState alpha = tensor(build_alpha_ab(), build_alpha_c({-0.5}));
  QuantumState beta = cphase(alpha, 0, 2);
  return QuantumState(beta.matrix(), beta.dims(), "beta");
}

QuantumState add_white_noise(const QuantumState& s, NoiseParam noise) {
  if (noise.p < 0.0 || noise.p > 1.0)
    throw std::invalid_argument("add_white_noise: p must lie in [0,1]");
  const int d = s.dim();
  CMatrix m = (1.0 - noise.p) * s.matrix() + (noise.p / d) * CMatrix::Identity(d, d);
  return QuantumState(std::move(m), s.dims(), s.label());
}

}  // namespace entdist
