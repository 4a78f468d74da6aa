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

// Dense pure-state engine for small registers (at most 5 qubits).
//
// Qubit ordering is big-endian: qubit 0 is the most significant bit of the
// amplitude index. When an operator acts on an ordered list of target qubits,
// the first target is the most significant bit within the operator's basis.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace probtele {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxQubits = 5;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kStateTol = 1e-10;
/// Outcomes below this probability are never sampled and have no post-state.
inline constexpr double kZeroProbability = 1e-14;

class StateVector {
 public:
  /// Validates length (2^n, 1 <= n <= 5) and unit norm within kStateTol.
  static StateVector from_amplitudes(CVector amplitudes);
  static StateVector from_amplitudes(std::initializer_list<Complex> amplitudes);
  /// Rescales to unit norm; throws InvalidState on a zero vector.
  static StateVector normalized(CVector amplitudes);
  static StateVector basis(std::size_t num_qubits, std::size_t index);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  StateVector(CVector amplitudes, std::size_t num_qubits)
      : amplitudes_(std::move(amplitudes)), num_qubits_(num_qubits) {}

  CVector amplitudes_;
  std::size_t num_qubits_;
};

class UnitaryMatrix {
 public:
  /// Throws InvalidUnitary unless square, power-of-two sized and U^dagger U = I
  /// entrywise within kAlgebraTol.
  static UnitaryMatrix checked(CMatrix entries);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t num_qubits() const;
  const CMatrix& matrix() const { return entries_; }

 private:
  explicit UnitaryMatrix(CMatrix entries) : entries_(std::move(entries)) {}
  CMatrix entries_;
};

/// Measurement operators M_i with sum_i M_i^dagger M_i = I.
class KrausSet {
 public:
  /// Throws InvalidKrausSet when the operators are not square of equal
  /// power-of-two dimension, labels mismatch, or completeness fails by more
  /// than kStateTol.
  KrausSet(std::vector<CMatrix> operators, std::vector<std::string> labels);

  std::size_t size() const { return operators_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(operators_.front().rows()); }
  const std::vector<CMatrix>& operators() const { return operators_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const CMatrix& operator[](std::size_t i) const { return operators_.at(i); }

 private:
  std::vector<CMatrix> operators_;
  std::vector<std::string> labels_;
};

class DensityMatrix {
 public:
  /// Throws InvalidDensityMatrix unless Hermitian (1e-12), unit trace (1e-10)
  /// and positive semidefinite (eigenvalues >= -1e-10).
  static DensityMatrix checked(CMatrix entries);
  static DensityMatrix pure(const StateVector& state);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  double purity() const;

 private:
  explicit DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {}
  CMatrix entries_;
};

/// Largest entrywise deviation of U^dagger U from the identity.
double unitarity_defect(const CMatrix& u);
/// Largest entrywise deviation of sum_i M_i^dagger M_i from the identity.
double completeness_defect(std::span<const CMatrix> operators);

StateVector tensor_product(std::span<const StateVector> states);
StateVector tensor_product(std::initializer_list<StateVector> states);

StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::span<const std::size_t> targets);
StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::initializer_list<std::size_t> targets);

struct MeasurementResult {
  std::size_t outcome;
  double probability;
  StateVector post_state;
};

/// Born probabilities of measuring `targets` in `basis`. Throws InvalidBasis.
std::vector<double> projective_distribution(const StateVector& state,
                                            std::span<const StateVector> basis,
                                            std::span<const std::size_t> targets);
/// Post-measurement state for a given outcome; the measured qubits are left in
/// the corresponding basis vector. Throws DegenerateOutcome below kZeroProbability.
MeasurementResult project(const StateVector& state, std::span<const StateVector> basis,
                          std::span<const std::size_t> targets, std::size_t outcome);
MeasurementResult projective_measure(const StateVector& state,
                                     std::span<const StateVector> basis,
                                     std::span<const std::size_t> targets, Rng& rng);

/// Computational basis of `num_qubits` qubits, as used for ancilla readout.
std::vector<StateVector> computational_basis(std::size_t num_qubits);

/// p_i = <psi| M_i^dagger M_i |psi> on `targets`; sums to one.
std::vector<double> outcome_distribution(const StateVector& state, const KrausSet& kraus,
                                         std::span<const std::size_t> targets);
/// M_i |psi> / sqrt(p_i). Throws DegenerateOutcome below kZeroProbability.
MeasurementResult apply_kraus(const StateVector& state, const KrausSet& kraus,
                              std::span<const std::size_t> targets, std::size_t outcome);
MeasurementResult generalized_measure(const StateVector& state, const KrausSet& kraus,
                                      std::span<const std::size_t> targets, Rng& rng);

/// Samples an index with the given weights, never returning one whose weight is
/// below kZeroProbability.
std::size_t sample_index(std::span<const double> probabilities, Rng& rng);

DensityMatrix reduced_density(const StateVector& state, std::span<const std::size_t> keep);
DensityMatrix reduced_density(const StateVector& state, std::initializer_list<std::size_t> keep);

/// <target| rho |target>.
double fidelity_pure(const DensityMatrix& rho, const StateVector& target);

/// Pure state of one qubit of a register in which that qubit is unentangled
/// (reduced purity 1 within kStateTol), phase-aligned so that its
/// largest-modulus amplitude is real and positive. Throws InvalidState otherwise.
StateVector factor_qubit(const StateVector& state, std::size_t qubit);

/// Multiplies by the phase that makes the largest-modulus amplitude real and
/// positive, so states equal up to global phase compare entrywise.
CVector align_global_phase(const CVector& amplitudes);

}  // namespace probtele
