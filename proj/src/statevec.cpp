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

#include "probtele/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "probtele/errors.hpp"

namespace probtele {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

void check_targets(std::size_t num_qubits, std::span<const std::size_t> targets) {
  if (targets.empty()) throw InvalidArgument("target list is empty");
  std::vector<bool> seen(num_qubits, false);
  for (std::size_t t : targets) {
    if (t >= num_qubits) {
      throw InvalidArgument("qubit index " + std::to_string(t) + " out of range for " +
                            std::to_string(num_qubits) + "-qubit register");
    }
    if (seen[t]) throw InvalidArgument("duplicate qubit index " + std::to_string(t));
    seen[t] = true;
  }
}

// Splits the index space into (target sub-index, rest) coordinates. For every
// rest configuration `bases()` holds the full index with all target bits clear;
// `offsets()[k]` is the bit pattern of target sub-index k.
class SubsystemIndexer {
 public:
  SubsystemIndexer(std::size_t num_qubits, std::span<const std::size_t> targets) {
    check_targets(num_qubits, targets);
    const std::size_t k = targets.size();
    auto bit_of = [num_qubits](std::size_t q) { return std::size_t{1} << (num_qubits - 1 - q); };

    offsets_.assign(std::size_t{1} << k, 0);
    for (std::size_t sub = 0; sub < offsets_.size(); ++sub) {
      std::size_t full = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (sub & (std::size_t{1} << (k - 1 - j))) full |= bit_of(targets[j]);
      }
      offsets_[sub] = full;
    }

    std::size_t target_mask = 0;
    for (std::size_t t : targets) target_mask |= bit_of(t);
    const std::size_t dim = std::size_t{1} << num_qubits;
    bases_.reserve(dim >> k);
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & target_mask) == 0) bases_.push_back(i);
    }
  }

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<std::size_t>& bases() const { return bases_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> bases_;
};

// Stack-backed scratch for one target block (at most kMaxQubits qubits).
using SubVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, (1 << kMaxQubits), 1>;

// Applies an arbitrary (not necessarily unitary) operator on `targets`.
CVector apply_operator(const CVector& amps, std::size_t num_qubits, const CMatrix& op,
                       std::span<const std::size_t> targets) {
  const SubsystemIndexer idx(num_qubits, targets);
  const auto sub_dim = static_cast<Eigen::Index>(idx.offsets().size());
  if (op.rows() != sub_dim || op.cols() != sub_dim) {
    throw InvalidArgument("operator dimension " + std::to_string(op.rows()) +
                          " does not match " + std::to_string(targets.size()) + " target qubits");
  }
  CVector out(amps.size());
  SubVector sub(sub_dim);
  SubVector res(sub_dim);
  for (std::size_t base : idx.bases()) {
    for (Eigen::Index k = 0; k < sub_dim; ++k) {
      sub(k) = amps(static_cast<Eigen::Index>(base + idx.offsets()[static_cast<std::size_t>(k)]));
    }
    res.noalias() = op * sub;
    for (Eigen::Index k = 0; k < sub_dim; ++k) {
      out(static_cast<Eigen::Index>(base + idx.offsets()[static_cast<std::size_t>(k)])) = res(k);
    }
  }
  return out;
}

void check_basis(std::span<const StateVector> basis, std::size_t num_targets) {
  const std::size_t dim = std::size_t{1} << num_targets;
  if (basis.size() != dim) {
    throw InvalidBasis("basis has " + std::to_string(basis.size()) + " vectors, expected " +
                       std::to_string(dim));
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != dim) throw InvalidBasis("basis vector dimension mismatch");
    for (std::size_t j = i; j < basis.size(); ++j) {
      const Complex ip = basis[i].amplitudes().dot(basis[j].amplitudes());
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - expected) > kStateTol) {
        throw InvalidBasis("basis vectors " + std::to_string(i) + " and " + std::to_string(j) +
                           " are not orthonormal");
      }
    }
  }
}

CMatrix projector(const StateVector& v) { return v.amplitudes() * v.amplitudes().adjoint(); }

std::vector<double> distribution_from_operators(const StateVector& state,
                                                std::span<const CMatrix> effects,
                                                std::span<const std::size_t> targets) {
  std::vector<double> probs;
  probs.reserve(effects.size());
  for (const CMatrix& e : effects) {
    const CVector v = apply_operator(state.amplitudes(), state.num_qubits(), e, targets);
    probs.push_back(v.squaredNorm());
  }
  return probs;
}

MeasurementResult collapse(const StateVector& state, const CMatrix& op,
                           std::span<const std::size_t> targets, std::size_t outcome) {
  CVector v = apply_operator(state.amplitudes(), state.num_qubits(), op, targets);
  const double p = v.squaredNorm();
  if (p < kZeroProbability) {
    throw DegenerateOutcome("outcome " + std::to_string(outcome) + " has probability " +
                            std::to_string(p));
  }
  v /= std::sqrt(p);
  return {outcome, p, StateVector::from_amplitudes(std::move(v))};
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::from_amplitudes(CVector amplitudes) {
  const auto n = static_cast<std::size_t>(amplitudes.size());
  if (!is_power_of_two(n) || n < 2) {
    throw InvalidState("amplitude count " + std::to_string(n) + " is not 2^n with n >= 1");
  }
  const std::size_t qubits = log2_exact(n);
  if (qubits > kMaxQubits) {
    throw InvalidState("register of " + std::to_string(qubits) + " qubits exceeds the limit of " +
                       std::to_string(kMaxQubits));
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kStateTol) {
    throw InvalidState("state norm " + std::to_string(norm) + " differs from 1");
  }
  return StateVector(std::move(amplitudes), qubits);
}

StateVector StateVector::from_amplitudes(std::initializer_list<Complex> amplitudes) {
  CVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const Complex& c : amplitudes) v(i++) = c;
  return from_amplitudes(std::move(v));
}

StateVector StateVector::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-300) throw InvalidState("cannot normalize the zero vector");
  amplitudes /= norm;
  return from_amplitudes(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw InvalidArgument("unsupported qubit count " + std::to_string(num_qubits));
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw InvalidArgument("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v), num_qubits);
}

// ---------------------------------------------------------------------------
// UnitaryMatrix / KrausSet / DensityMatrix

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double completeness_defect(std::span<const CMatrix> operators) {
  if (operators.empty()) return INFINITY;
  const Eigen::Index dim = operators.front().cols();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const CMatrix& m : operators) {
    if (m.cols() != dim || m.rows() != dim) return INFINITY;
    sum += m.adjoint() * m;
  }
  return (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::checked(CMatrix entries) {
  const auto dim = static_cast<std::size_t>(entries.rows());
  if (entries.rows() != entries.cols() || !is_power_of_two(dim) || dim < 2) {
    throw InvalidUnitary("matrix is not square with power-of-two dimension");
  }
  const double defect = unitarity_defect(entries);
  if (!(defect <= kAlgebraTol)) {
    throw InvalidUnitary("U^dagger U deviates from I by " + std::to_string(defect));
  }
  return UnitaryMatrix(std::move(entries));
}

std::size_t UnitaryMatrix::num_qubits() const { return log2_exact(dim()); }

KrausSet::KrausSet(std::vector<CMatrix> operators, std::vector<std::string> labels)
    : operators_(std::move(operators)), labels_(std::move(labels)) {
  if (operators_.empty()) throw InvalidKrausSet("empty Kraus set");
  if (labels_.size() != operators_.size()) throw InvalidKrausSet("label count mismatch");
  const auto dim = static_cast<std::size_t>(operators_.front().rows());
  if (!is_power_of_two(dim) || dim < 2) throw InvalidKrausSet("dimension is not 2^n");
  for (const CMatrix& m : operators_) {
    if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
      throw InvalidKrausSet("operators must be square and of equal dimension");
    }
  }
  const double defect = completeness_defect(operators_);
  if (!(defect <= kStateTol)) {
    throw InvalidKrausSet("completeness violated by " + std::to_string(defect));
  }
}

DensityMatrix DensityMatrix::checked(CMatrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidDensityMatrix("density matrix must be square");
  }
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw InvalidDensityMatrix("density matrix is not Hermitian");
  }
  if (std::abs(entries.trace() - Complex(1.0)) > kStateTol) {
    throw InvalidDensityMatrix("density matrix trace differs from 1");
  }
  double min_eigenvalue = 0.0;
  if (entries.rows() == 2) {
    const double half_gap = std::hypot(0.5 * (entries(0, 0).real() - entries(1, 1).real()),
                                       std::abs(entries(0, 1)));
    min_eigenvalue = 0.5 * entries.trace().real() - half_gap;
  } else {
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries, Eigen::EigenvaluesOnly);
    min_eigenvalue = solver.eigenvalues().minCoeff();
  }
  if (min_eigenvalue < -kStateTol) {
    throw InvalidDensityMatrix("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(entries));
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  return DensityMatrix(projector(state));
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

// ---------------------------------------------------------------------------
// Composition and evolution

StateVector tensor_product(std::span<const StateVector> states) {
  if (states.empty()) throw InvalidArgument("tensor_product of an empty list");
  CVector acc = states.front().amplitudes();
  std::size_t qubits = states.front().num_qubits();
  for (std::size_t s = 1; s < states.size(); ++s) {
    const CVector& rhs = states[s].amplitudes();
    qubits += states[s].num_qubits();
    if (qubits > kMaxQubits) throw InvalidArgument("tensor product exceeds the qubit limit");
    CVector next(acc.size() * rhs.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) {
      next.segment(i * rhs.size(), rhs.size()) = acc(i) * rhs;
    }
    acc = std::move(next);
  }
  return StateVector::from_amplitudes(std::move(acc));
}

StateVector tensor_product(std::initializer_list<StateVector> states) {
  return tensor_product(std::span<const StateVector>(states.begin(), states.size()));
}

StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::span<const std::size_t> targets) {
  if (u.dim() != (std::size_t{1} << targets.size())) {
    throw InvalidArgument("unitary of dimension " + std::to_string(u.dim()) + " cannot act on " +
                          std::to_string(targets.size()) + " qubits");
  }
  return StateVector::from_amplitudes(
      apply_operator(state.amplitudes(), state.num_qubits(), u.matrix(), targets));
}

StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::initializer_list<std::size_t> targets) {
  return apply_unitary(state, u, std::span<const std::size_t>(targets.begin(), targets.size()));
}

// ---------------------------------------------------------------------------
// Measurement

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  double total = 0.0;
  for (double p : probabilities) {
    if (p >= kZeroProbability) total += p;
  }
  if (total <= 0.0) throw DegenerateOutcome("no outcome has nonzero probability");
  std::uniform_real_distribution<double> uniform(0.0, total);
  const double r = uniform(rng);
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] < kZeroProbability) continue;
    cumulative += probabilities[i];
    last = i;
    if (r < cumulative) return i;
  }
  return last;
}

std::vector<StateVector> computational_basis(std::size_t num_qubits) {
  std::vector<StateVector> basis;
  for (std::size_t i = 0; i < (std::size_t{1} << num_qubits); ++i) {
    basis.push_back(StateVector::basis(num_qubits, i));
  }
  return basis;
}

std::vector<double> projective_distribution(const StateVector& state,
                                            std::span<const StateVector> basis,
                                            std::span<const std::size_t> targets) {
  check_targets(state.num_qubits(), targets);
  check_basis(basis, targets.size());
  // Amplitude of basis vector j within each rest block is <b_j|sub>.
  const SubsystemIndexer idx(state.num_qubits(), targets);
  const auto sub_dim = static_cast<Eigen::Index>(basis.size());
  CMatrix bras(sub_dim, sub_dim);
  for (Eigen::Index j = 0; j < sub_dim; ++j) bras.row(j) = basis[static_cast<std::size_t>(j)].amplitudes().adjoint();
  std::vector<double> probs(basis.size(), 0.0);
  SubVector sub(sub_dim);
  SubVector coeff(sub_dim);
  for (std::size_t base : idx.bases()) {
    for (Eigen::Index k = 0; k < sub_dim; ++k) {
      sub(k) = state[base + idx.offsets()[static_cast<std::size_t>(k)]];
    }
    coeff.noalias() = bras * sub;
    for (Eigen::Index j = 0; j < sub_dim; ++j) probs[static_cast<std::size_t>(j)] += std::norm(coeff(j));
  }
  return probs;
}

MeasurementResult project(const StateVector& state, std::span<const StateVector> basis,
                          std::span<const std::size_t> targets, std::size_t outcome) {
  check_targets(state.num_qubits(), targets);
  check_basis(basis, targets.size());
  if (outcome >= basis.size()) throw InvalidArgument("outcome index out of range");
  return collapse(state, projector(basis[outcome]), targets, outcome);
}

MeasurementResult projective_measure(const StateVector& state,
                                     std::span<const StateVector> basis,
                                     std::span<const std::size_t> targets, Rng& rng) {
  const std::vector<double> probs = projective_distribution(state, basis, targets);
  return project(state, basis, targets, sample_index(probs, rng));
}

std::vector<double> outcome_distribution(const StateVector& state, const KrausSet& kraus,
                                         std::span<const std::size_t> targets) {
  if (kraus.dim() != (std::size_t{1} << targets.size())) {
    throw InvalidArgument("Kraus dimension does not match the target count");
  }
  return distribution_from_operators(state, kraus.operators(), targets);
}

MeasurementResult apply_kraus(const StateVector& state, const KrausSet& kraus,
                              std::span<const std::size_t> targets, std::size_t outcome) {
  if (kraus.dim() != (std::size_t{1} << targets.size())) {
    throw InvalidArgument("Kraus dimension does not match the target count");
  }
  if (outcome >= kraus.size()) throw InvalidArgument("outcome index out of range");
  return collapse(state, kraus[outcome], targets, outcome);
}

MeasurementResult generalized_measure(const StateVector& state, const KrausSet& kraus,
                                      std::span<const std::size_t> targets, Rng& rng) {
  const std::vector<double> probs = outcome_distribution(state, kraus, targets);
  return apply_kraus(state, kraus, targets, sample_index(probs, rng));
}

// ---------------------------------------------------------------------------
// Reduced states

DensityMatrix reduced_density(const StateVector& state, std::span<const std::size_t> keep) {
  const SubsystemIndexer idx(state.num_qubits(), keep);
  const auto sub_dim = static_cast<Eigen::Index>(idx.offsets().size());
  CMatrix rho = CMatrix::Zero(sub_dim, sub_dim);
  CVector sub(sub_dim);
  for (std::size_t base : idx.bases()) {
    for (Eigen::Index k = 0; k < sub_dim; ++k) {
      sub(k) = state[base + idx.offsets()[static_cast<std::size_t>(k)]];
    }
    rho += sub * sub.adjoint();
  }
  // Remove rounding asymmetry so the Hermiticity check is exact.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix::checked(std::move(rho));
}

DensityMatrix reduced_density(const StateVector& state, std::initializer_list<std::size_t> keep) {
  return reduced_density(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

double fidelity_pure(const DensityMatrix& rho, const StateVector& target) {
  if (rho.dim() != target.dim()) throw InvalidArgument("fidelity dimension mismatch");
  const double f = target.amplitudes().dot(rho.matrix() * target.amplitudes()).real();
  return std::clamp(f, 0.0, 1.0);
}

CVector align_global_phase(const CVector& amplitudes) {
  Eigen::Index best = 0;
  amplitudes.cwiseAbs().maxCoeff(&best);
  const Complex pivot = amplitudes(best);
  if (std::abs(pivot) == 0.0) return amplitudes;
  return amplitudes * (std::conj(pivot) / std::abs(pivot));
}

StateVector factor_qubit(const StateVector& state, std::size_t qubit) {
  const std::size_t keep[] = {qubit};
  const DensityMatrix rho = reduced_density(state, keep);
  if (rho.purity() < 1.0 - kStateTol) {
    throw InvalidState("qubit " + std::to_string(qubit) + " is entangled with the register");
  }
  // rho = |v><v|: any nonzero column is proportional to v.
  Eigen::Index col = 0;
  rho.matrix().diagonal().real().maxCoeff(&col);
  return StateVector::normalized(align_global_phase(rho.matrix().col(col)));
}

}  // namespace probtele
