// Copyright 2026 The probtele Authors
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

#include "probtele/protomath.hpp"

#include <cmath>

#include "probtele/errors.hpp"

namespace probtele {

namespace {

constexpr double kMinB = 1e-7;

// sqrt(1 - |b|^2 / |a|^2), clamped at zero for the maximal channel.
double off_diagonal(const ChannelParams& ch) {
  return std::sqrt(std::max(0.0, 1.0 - ch.b2() / ch.a2()));
}

CMatrix mat2(Complex m00, Complex m01, Complex m10, Complex m11) {
  CMatrix m(2, 2);
  m << m00, m01, m10, m11;
  return m;
}

// Column vector in the 2-qubit computational basis |00>,|01>,|10>,|11>.
CVector vec4(Complex v00, Complex v01, Complex v10, Complex v11) {
  CVector v(4);
  v << v00, v01, v10, v11;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// ChannelParams / InputQubit

ChannelParams ChannelParams::from_amplitudes(double a, Complex b) {
  if (!std::isfinite(a) || !std::isfinite(b.real()) || !std::isfinite(b.imag())) {
    throw InvalidChannel("channel coefficients must be finite");
  }
  if (!(a > 0.0)) throw InvalidChannel("coefficient a must be real and positive");
  const double norm2 = a * a + std::norm(b);
  if (std::abs(norm2 - 1.0) > kAlgebraTol) {
    throw InvalidChannel("|a|^2 + |b|^2 = " + std::to_string(norm2) + ", expected 1");
  }
  if (std::abs(b) > a + kAlgebraTol) throw InvalidChannel("channel requires |a| >= |b|");
  if (!(std::abs(b) > kMinB)) throw InvalidChannel("channel requires |b| > 1e-7");
  return ChannelParams(a, b);
}

ChannelParams ChannelParams::from_amplitudes(Complex a, Complex b) {
  if (a.imag() != 0.0) throw InvalidChannel("coefficient a must be real");
  return from_amplitudes(a.real(), b);
}

ChannelParams ChannelParams::from_b2(double b2, double b_phase) {
  if (!(b2 > 0.0 && b2 <= 0.5)) throw InvalidChannel("b2 must lie in (0, 0.5]");
  if (!std::isfinite(b_phase)) throw InvalidChannel("b phase must be finite");
  return from_amplitudes(std::sqrt(1.0 - b2), std::polar(std::sqrt(b2), b_phase));
}

StateVector ChannelParams::pair_state() const {
  return StateVector::from_amplitudes({a_, 0.0, 0.0, b_});
}

InputQubit InputQubit::from_amplitudes(Complex alpha, Complex beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kAlgebraTol) {
    throw InvalidArgument("input qubit requires |alpha|^2 + |beta|^2 = 1");
  }
  return InputQubit(alpha, beta);
}

InputQubit InputQubit::from_state(const StateVector& state) {
  if (state.num_qubits() != 1) throw InvalidArgument("input qubit must be a 1-qubit state");
  return from_amplitudes(state[0], state[1]);
}

StateVector InputQubit::state() const { return StateVector::from_amplitudes({alpha_, beta_}); }

// ---------------------------------------------------------------------------
// Names

std::string_view correction_name(CorrectionCode code) {
  switch (code) {
    case CorrectionCode::Identity: return "I";
    case CorrectionCode::Z: return "Z";
    case CorrectionCode::X: return "X";
    case CorrectionCode::iY: return "iY";
    case CorrectionCode::Fail: return "fail";
  }
  return "?";
}

std::string_view bell_name(std::size_t index) {
  static constexpr std::array<std::string_view, 4> names = {"phi+", "phi-", "psi+", "psi-"};
  if (index >= names.size()) throw InvalidArgument("Bell index out of range");
  return names[index];
}

std::string label_text(const OutcomeLabel& label) {
  switch (label.kind) {
    case OutcomeKind::Bell: return std::string(bell_name(label.value));
    case OutcomeKind::Ancilla: return "m" + std::to_string(label.value);
    case OutcomeKind::Povm: return "M" + std::to_string(label.value);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Matrices

std::array<StateVector, 4> bell_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  return {
      StateVector::from_amplitudes({r, 0.0, 0.0, r}),
      StateVector::from_amplitudes({r, 0.0, 0.0, -r}),
      StateVector::from_amplitudes({0.0, r, r, 0.0}),
      StateVector::from_amplitudes({0.0, r, -r, 0.0}),
  };
}

UnitaryMatrix matrix_A(const ChannelParams& ch) {
  const double s = off_diagonal(ch);
  return UnitaryMatrix::checked(mat2(ch.b() / ch.a(), s, s, -std::conj(ch.b()) / ch.a()));
}

CMatrix matrix_A_literal(const ChannelParams& ch) {
  const double s = off_diagonal(ch);
  return mat2(ch.b() / ch.a(), s, s, -ch.b() / ch.a());
}

CMatrix u_f_blocks(std::size_t index, const CMatrix& block) {
  if (index > 3) throw InvalidArgument("U_F index must be in 0..3");
  const CMatrix z = pauli_z().matrix();
  const CMatrix sz = (index % 2 == 0) ? z : CMatrix(-z);
  CMatrix u = CMatrix::Zero(4, 4);
  if (index < 2) {
    u.block(0, 0, 2, 2) = block;
    u.block(2, 2, 2, 2) = sz;
  } else {
    u.block(0, 2, 2, 2) = sz;
    u.block(2, 0, 2, 2) = block;
  }
  return u;
}

UnitaryMatrix u_f(std::size_t index, const ChannelParams& ch) {
  return UnitaryMatrix::checked(u_f_blocks(index, matrix_A(ch).matrix()));
}

UnitaryMatrix u_s(const ChannelParams& ch) {
  const CMatrix f0 = u_f(0, ch).matrix();
  CMatrix u = CMatrix::Zero(8, 8);
  u.block(0, 0, 4, 4) = f0;
  u.block(4, 4, 4, 4) = f0;
  return UnitaryMatrix::checked(std::move(u));
}

KrausSet measurement_operators(const ChannelParams& ch) {
  const double a = ch.a();
  const Complex b = ch.b();
  const double scale = 1.0 / (std::sqrt(2.0) * std::abs(a));
  // M = scale * |ket><bra|, where <bra| is the row vector of the listed
  // coefficients (taken as written, not conjugated).
  auto outer = [scale](const CVector& ket, const CVector& bra_row) -> CMatrix {
    return scale * ket * bra_row.transpose();
  };
  std::vector<CMatrix> ops;
  ops.push_back(outer(vec4(a, 0, 0, b), vec4(b, 0, 0, a)));
  ops.push_back(outer(vec4(a, 0, 0, -b), vec4(b, 0, 0, -a)));
  ops.push_back(outer(vec4(0, b, a, 0), vec4(0, a, b, 0)));
  ops.push_back(outer(vec4(0, b, -a, 0), vec4(0, a, -b, 0)));
  CMatrix m4 = CMatrix::Zero(4, 4);
  m4(0, 0) = off_diagonal(ch);
  m4(2, 2) = off_diagonal(ch);
  ops.push_back(std::move(m4));
  return KrausSet(std::move(ops), {"M0", "M1", "M2", "M3", "M4"});
}

UnitaryMatrix pauli_x() { return UnitaryMatrix::checked(mat2(0, 1, 1, 0)); }
UnitaryMatrix pauli_z() { return UnitaryMatrix::checked(mat2(1, 0, 0, -1)); }
UnitaryMatrix identity2() { return UnitaryMatrix::checked(mat2(1, 0, 0, 1)); }
UnitaryMatrix i_pauli_y() { return UnitaryMatrix::checked(mat2(0, 1, -1, 0)); }

UnitaryMatrix correction_matrix(CorrectionCode code) {
  switch (code) {
    case CorrectionCode::Identity: return identity2();
    case CorrectionCode::Z: return pauli_z();
    case CorrectionCode::X: return pauli_x();
    case CorrectionCode::iY: return i_pauli_y();
    case CorrectionCode::Fail: break;
  }
  throw InvalidArgument("a failed run has no correction matrix");
}

// ---------------------------------------------------------------------------
// Receiver table

CorrectionCode correction_for(std::span<const OutcomeLabel> payload) {
  static constexpr std::array<CorrectionCode, 4> by_index = {
      CorrectionCode::Identity, CorrectionCode::Z, CorrectionCode::X, CorrectionCode::iY};

  auto bad = []() -> CorrectionCode { throw InvalidArgument("unrecognized outcome payload"); };

  if (payload.size() == 1) {
    const OutcomeLabel& only = payload[0];
    switch (only.kind) {
      case OutcomeKind::Povm:
        if (only.value < 4) return by_index[only.value];
        if (only.value == 4) return CorrectionCode::Fail;
        return bad();
      case OutcomeKind::Ancilla:
        if (only.value == 1) return CorrectionCode::Fail;
        return bad();
      case OutcomeKind::Bell:
        if (only.value < 4) return by_index[only.value];
        return bad();
    }
  }
  if (payload.size() == 2 && payload[0].kind == OutcomeKind::Ancilla &&
      payload[1].kind == OutcomeKind::Bell && payload[1].value < 4) {
    if (payload[0].value == 0) return by_index[payload[1].value];
    if (payload[0].value == 1) return CorrectionCode::Fail;
  }
  return bad();
}

}  // namespace probtele
