#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sqkd/rng.hpp"

namespace sqkd {

using Complex = std::complex<double>;

/// Kernel size limit: 3 protocol qubits plus up to a 3-qubit probe.
inline constexpr int kMaxQubits = 6;

/// Tolerance for algebraic identities (unitarity, normalization, Gram).
inline constexpr double kAlgebraTol = 1e-10;

/// Tolerance for exactly constructed states; also the probability floor
/// below which measurement outcomes are treated as impossible.
inline constexpr double kExactTol = 1e-12;

/// Normalized amplitude vector over an ordered qubit register.
///
/// Qubits are numbered from 1 and qubit 1 is the most significant bit of
/// the basis-state index, so |q1 q2 q3> reads left to right: index 0b011
/// of a 3-qubit register is the state |011>.
class StateVector {
 public:
  /// Validates the dimension and unit norm (within kAlgebraTol).
  StateVector(int num_qubits, Eigen::VectorXcd amplitudes);

  static StateVector basis_state(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amp(std::uint64_t index) const { return amps_(static_cast<Eigen::Index>(index)); }

  /// Bit mask selecting `qubit` inside a basis-state index.
  std::uint64_t qubit_mask(int qubit) const;

 private:
  int num_qubits_;
  Eigen::VectorXcd amps_;
};

/// Square complex matrix with U†U = I within kAlgebraTol (checked).
class Unitary {
 public:
  explicit Unitary(Eigen::MatrixXcd matrix, double tol = kAlgebraTol);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Unitary adjoint() const { return Unitary(matrix_.adjoint()); }

 private:
  Eigen::MatrixXcd matrix_;
};

/// Orthonormal family of 2^k joint basis states over k qubits, with
/// outcome labels. Orthonormality is checked at construction.
class MeasurementBasis {
 public:
  MeasurementBasis(std::vector<StateVector> states, std::vector<std::string> labels);

  int qubit_count() const { return qubit_count_; }
  std::size_t size() const { return states_.size(); }
  const StateVector& state(std::size_t outcome) const { return states_[outcome]; }
  const std::string& label(std::size_t outcome) const { return labels_[outcome]; }

 private:
  int qubit_count_;
  std::vector<StateVector> states_;
  std::vector<std::string> labels_;
};

/// Hermitian, positive semidefinite, unit-trace matrix (checked).
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd matrix, double tol = kAlgebraTol);

  static DensityMatrix pure(const StateVector& state);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXcd matrix_;
};

struct MeasurementResult {
  std::size_t outcome;
  std::string label;
  double probability;
  StateVector state;
};

/// Kronecker product; a's qubits become the high-order qubits.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Applies `u` to the listed qubits (identity elsewhere). `targets` are
/// ordered: targets[0] is the most significant qubit of u's index space.
StateVector apply_unitary(const StateVector& state, const Unitary& u,
                          const std::vector<int>& targets);

/// Born probabilities of each basis outcome on the target qubits.
std::vector<double> born_distribution(const StateVector& state,
                                      const std::vector<int>& targets,
                                      const MeasurementBasis& basis);

/// Deterministically projects onto one basis outcome and renormalizes.
/// Throws if the outcome probability is below kExactTol.
std::pair<double, StateVector> project_onto(const StateVector& state,
                                            const std::vector<int>& targets,
                                            const MeasurementBasis& basis,
                                            std::size_t outcome);

/// Samples an outcome from the Born distribution (probabilities below
/// kExactTol are zeroed and the rest renormalized before sampling) and
/// collapses. Non-target qubits persist.
MeasurementResult measure_subset(const StateVector& state,
                                 const std::vector<int>& targets,
                                 const MeasurementBasis& basis, Rng& rng);

/// Partial trace down to the listed qubits; keep[0] becomes the most
/// significant qubit of the reduced system.
DensityMatrix reduced_density(const StateVector& state, const std::vector<int>& keep);

/// (1/2)·||a − b||_1 via the eigenvalues of the Hermitian difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phase correction.
Unitary random_unitary(Eigen::Index dim, Rng& rng);

Complex inner_product(const StateVector& a, const StateVector& b);

/// Max absolute amplitude difference, for exact-state comparisons.
double max_amplitude_diff(const StateVector& a, const StateVector& b);

}  // namespace sqkd
