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

// Operator families for probabilistic teleportation over a partially
// entangled pair a|00> + b|11>.

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "probtele/statevec.hpp"

namespace probtele {

/// Coefficients of the channel a|00> + b|11>: a real and positive,
/// |a|^2 + |b|^2 = 1, |a| >= |b| > 1e-7.
class ChannelParams {
 public:
  /// Throws InvalidChannel on any violated invariant.
  static ChannelParams from_amplitudes(double a, Complex b);
  /// Overload admitting a complex `a`, which is rejected unless its imaginary
  /// part vanishes.
  static ChannelParams from_amplitudes(Complex a, Complex b);
  /// |b|^2 in (0, 0.5] and the phase of b; a = sqrt(1 - |b|^2).
  static ChannelParams from_b2(double b2, double b_phase = 0.0);
  static ChannelParams maximal() { return from_b2(0.5); }

  double a() const { return a_; }
  Complex b() const { return b_; }
  double a2() const { return a_ * a_; }
  double b2() const { return std::norm(b_); }
  double b_phase() const { return std::arg(b_); }

  /// The pair itself as a 2-qubit state.
  StateVector pair_state() const;

 private:
  ChannelParams(double a, Complex b) : a_(a), b_(b) {}
  double a_;
  Complex b_;
};

/// Unknown input alpha|0> + beta|1>; complex alpha is admitted.
class InputQubit {
 public:
  /// Throws InvalidArgument unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  static InputQubit from_amplitudes(Complex alpha, Complex beta);
  static InputQubit from_state(const StateVector& state);

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  StateVector state() const;

 private:
  InputQubit(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {}
  Complex alpha_;
  Complex beta_;
};

enum class CorrectionCode { Identity, Z, X, iY, Fail };
std::string_view correction_name(CorrectionCode code);

enum class BellState : std::size_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };
std::string_view bell_name(std::size_t index);

/// (phi+, phi-, psi+, psi-) in that order.
std::array<StateVector, 4> bell_basis();

/// 2x2 block used by the receiver-side transformation:
///   [[ b/a,  s ], [ s, -conj(b)/a ]],  s = sqrt(1 - |b|^2/|a|^2).
UnitaryMatrix matrix_A(const ChannelParams& ch);
/// Same block with the (1,1) entry -b/a taken literally; unitary only for
/// real b. Kept for the regression that documents the difference.
CMatrix matrix_A_literal(const ChannelParams& ch);

/// Receiver transformation for Bell outcome `index` (0..3), acting on
/// (particle, ancilla) with the particle as the more significant qubit.
UnitaryMatrix u_f(std::size_t index, const ChannelParams& ch);
/// Assembles the four block layouts from an arbitrary 2x2 block; used to
/// build u_f and, in verification, its literal-block counterpart.
CMatrix u_f_blocks(std::size_t index, const CMatrix& block);

/// Sender dilation unitary diag(U_F^0, U_F^0) acting on (1, 2, m).
UnitaryMatrix u_s(const ChannelParams& ch);

/// The five sender measurement operators M_0..M_4 on particles (1, 2).
KrausSet measurement_operators(const ChannelParams& ch);

UnitaryMatrix pauli_x();
UnitaryMatrix pauli_z();
UnitaryMatrix identity2();
/// i * sigma_y = [[0, 1], [-1, 0]].
UnitaryMatrix i_pauli_y();

/// Throws InvalidArgument for CorrectionCode::Fail.
UnitaryMatrix correction_matrix(CorrectionCode code);

/// Measurement labels carried in classical messages.
enum class OutcomeKind { Bell, Ancilla, Povm };

struct OutcomeLabel {
  OutcomeKind kind;
  std::size_t value;

  friend bool operator==(const OutcomeLabel&, const OutcomeLabel&) = default;
};

/// "phi+", "m0", "M3", ...
std::string label_text(const OutcomeLabel& label);

/// Receiver correction table of the sender-measurement scheme. Depends on the
/// message payload only. Accepted payloads:
///   [Povm i]               i in 0..4 (4 fails)
///   [Ancilla 0, Bell i]    i in 0..3
///   [Ancilla 1]            fails
///   [Bell i]               ancilla bit withheld by the sender
/// Throws InvalidArgument on anything else.
CorrectionCode correction_for(std::span<const OutcomeLabel> payload);

}  // namespace probtele
