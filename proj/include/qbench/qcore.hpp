// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra for few-qubit registers.
//
// Basis convention: qubit k is bit k of the basis index, so in a label
// |q1 q0> the rightmost character is qubit 0. Qubit 0 carries the
// single-qubit rotations of the preparation circuit and controls the
// controlled rotations; qubit 1 is their target.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbench {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

namespace tolerance {
inline constexpr double kStateNorm = 1e-8;
inline constexpr double kTrace = 1e-10;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kMinEigenvalue = -1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kProbabilitySum = 1e-9;
}  // namespace tolerance

inline constexpr int kMaxQubits = 10;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Number of qubits for a power-of-two dimension; throws otherwise.
inline int qubits_for_dim(std::size_t dim) {
  if (!is_power_of_two(dim)) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if (n > kMaxQubits) {
    throw DimensionError("at most " + std::to_string(kMaxQubits) + " qubits are supported");
  }
  return n;
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    qubits_for_dim(amplitudes_.size());
    for (const auto& a : amplitudes_) {
      if (!is_finite(a)) throw InvariantError("state amplitude is not finite");
    }
  }

  static StateVector basis(int n_qubits, std::size_t index) {
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    amps.at(index) = 1.0;
    return StateVector(std::move(amps));
  }

  std::size_t dim() const { return amplitudes_.size(); }
  int n_qubits() const { return qubits_for_dim(dim()); }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
  }

 private:
  std::vector<Complex> amplitudes_;
};

/// Deviation of a square matrix from the density-matrix invariants.
struct MatrixDiagnostics {
  double hermitian_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermitian_error <= tolerance::kHermitian && trace_error <= tolerance::kTrace &&
           min_eigenvalue >= tolerance::kMinEigenvalue;
  }
};

inline MatrixDiagnostics diagnose(const CMatrix& m) {
  MatrixDiagnostics d;
  d.hermitian_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity before wrapping.
  static DensityMatrix from_matrix(CMatrix m) {
    check_square(m);
    const auto d = diagnose(m);
    if (!d.ok()) {
      throw InvariantError("not a density matrix: hermitian error " + std::to_string(d.hermitian_error) +
                           ", trace error " + std::to_string(d.trace_error) + ", min eigenvalue " +
                           std::to_string(d.min_eigenvalue));
    }
    return DensityMatrix(std::move(m));
  }

  /// Wraps without the eigenvalue check. For channel outputs that preserve
  /// the invariants by construction.
  static DensityMatrix unchecked(CMatrix m) {
    check_square(m);
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix basis_state(int n_qubits, std::size_t index) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    CMatrix m = CMatrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    CMatrix m = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  int n_qubits() const { return qubits_for_dim(dim()); }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const CMatrix& matrix() const { return m_; }
  MatrixDiagnostics diagnostics() const { return diagnose(m_); }

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}

  static void check_square(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("density matrix must be square");
    qubits_for_dim(static_cast<std::size_t>(m.rows()));
    if (!m.allFinite()) throw InvariantError("density matrix has non-finite entries");
  }

  CMatrix m_;
};

class UnitaryMatrix {
 public:
  static UnitaryMatrix from_matrix(CMatrix m) {
    if (m.rows() != m.cols()) throw DimensionError("unitary must be square");
    if (!m.allFinite()) throw InvariantError("unitary has non-finite entries");
    const double err = unitarity_error(m);
    if (err > tolerance::kUnitary) {
      throw InvariantError("matrix is not unitary (deviation " + std::to_string(err) + ")");
    }
    return UnitaryMatrix(std::move(m));
  }

  static UnitaryMatrix identity(std::size_t dim) { return UnitaryMatrix(CMatrix::Identity(dim, dim)); }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const CMatrix& matrix() const { return m_; }

  UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }
  UnitaryMatrix operator*(const UnitaryMatrix& rhs) const {
    if (dim() != rhs.dim()) throw DimensionError("unitary dimension mismatch");
    return UnitaryMatrix(m_ * rhs.m_);
  }

  static double unitarity_error(const CMatrix& m) {
    const auto n = m.rows();
    return (m.adjoint() * m - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  }

 private:
  explicit UnitaryMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

namespace gates {

inline UnitaryMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return UnitaryMatrix::from_matrix(std::move(m));
}

/// CNOT on two local qubits: local qubit 0 (index bit 0) is the control,
/// local qubit 1 the target.
inline UnitaryMatrix cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(3, 1) = 1;
  m(1, 3) = 1;
  return UnitaryMatrix::from_matrix(std::move(m));
}

}  // namespace gates

inline DensityMatrix dm_from_statevector(const StateVector& sv) {
  if (std::abs(sv.norm_squared() - 1.0) > tolerance::kStateNorm) {
    throw InvariantError("state vector is not normalized (norm^2 = " + std::to_string(sv.norm_squared()) + ")");
  }
  const auto dim = static_cast<Eigen::Index>(sv.dim());
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = sv[static_cast<std::size_t>(i)];
  return DensityMatrix::unchecked(v * v.adjoint());
}

/// Lifts `u` onto an n-qubit register. Local qubit k of `u` (bit k of its
/// index) acts on register qubit targets[k]; every other qubit sees identity.
inline UnitaryMatrix embed_unitary(const UnitaryMatrix& u, std::span<const int> targets, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw DimensionError("qubit count out of range");
  const std::size_t k = targets.size();
  if (k == 0 || u.dim() != (std::size_t{1} << k)) {
    throw DimensionError("unitary of dimension " + std::to_string(u.dim()) + " does not match " +
                         std::to_string(k) + " target qubit(s)");
  }
  std::size_t target_mask = 0;
  for (int t : targets) {
    if (t < 0 || t >= n_qubits) throw DimensionError("target qubit " + std::to_string(t) + " out of range");
    if (target_mask & (std::size_t{1} << t)) throw DimensionError("duplicate target qubit " + std::to_string(t));
    target_mask |= std::size_t{1} << t;
  }

  const std::size_t dim = std::size_t{1} << n_qubits;
  auto local_index = [&](std::size_t global) {
    std::size_t local = 0;
    for (std::size_t j = 0; j < k; ++j) local |= ((global >> targets[j]) & 1U) << j;
    return local;
  };

  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~target_mask) != (c & ~target_mask)) continue;
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = u(local_index(r), local_index(c));
    }
  }
  return UnitaryMatrix::from_matrix(std::move(m));
}

inline UnitaryMatrix embed_unitary(const UnitaryMatrix& u, std::initializer_list<int> targets, int n_qubits) {
  return embed_unitary(u, std::span<const int>(targets.begin(), targets.size()), n_qubits);
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryMatrix& u) {
  if (rho.dim() != u.dim()) throw DimensionError("unitary and density matrix dimensions differ");
  return DensityMatrix::unchecked(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

/// Computational-basis outcome probabilities: the real diagonal, with
/// round-off negatives (down to -1e-10) clamped into [0, 1].
inline std::vector<double> basis_probabilities(const DensityMatrix& rho) {
  std::vector<double> probs(rho.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const double p = rho(i, i).real();
    if (p < tolerance::kMinEigenvalue) {
      throw InvariantError("negative basis probability " + std::to_string(p));
    }
    probs[i] = std::clamp(p, 0.0, 1.0);
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > tolerance::kProbabilitySum) {
    throw InvariantError("basis probabilities sum to " + std::to_string(sum));
  }
  return probs;
}

}  // namespace qbench
