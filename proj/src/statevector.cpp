#include "sqkd/statevector.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqkd {

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(num_qubits));
  }
}

// Validates targets (1-based, distinct, in range) and returns one mask per
// target qubit, plus the union mask.
struct TargetMasks {
  std::vector<std::uint64_t> bit;
  std::uint64_t all = 0;
};

TargetMasks target_masks(const StateVector& state, const std::vector<int>& targets) {
  if (targets.empty()) {
    throw std::invalid_argument("target list is empty");
  }
  TargetMasks m;
  m.bit.reserve(targets.size());
  for (int q : targets) {
    if (q < 1 || q > state.num_qubits()) {
      throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
    }
    const std::uint64_t mask = state.qubit_mask(q);
    if (m.all & mask) {
      throw std::invalid_argument("duplicate target qubit " + std::to_string(q));
    }
    m.bit.push_back(mask);
    m.all |= mask;
  }
  return m;
}

// Global index bits for local sub-index j (MSB-first over the target list).
std::vector<std::uint64_t> scatter_table(const TargetMasks& masks) {
  const std::size_t k = masks.bit.size();
  std::vector<std::uint64_t> table(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < table.size(); ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      if (j >> (k - 1 - b) & 1) {
        table[j] |= masks.bit[b];
      }
    }
  }
  return table;
}

// Projection overlaps c(base) = <basis_outcome|psi(., base)> for every
// configuration of the non-target qubits; base runs over indices whose
// target bits are all zero.
Eigen::VectorXcd outcome_overlaps(const StateVector& state,
                                  const std::vector<std::uint64_t>& scatter,
                                  std::uint64_t target_mask,
                                  const StateVector& outcome_state) {
  const auto dim = static_cast<std::uint64_t>(state.dim());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(state.dim());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    Complex acc = 0.0;
    for (std::size_t j = 0; j < scatter.size(); ++j) {
      acc += std::conj(outcome_state.amp(j)) * state.amp(base | scatter[j]);
    }
    c(static_cast<Eigen::Index>(base)) = acc;
  }
  return c;
}

void check_basis_matches(const MeasurementBasis& basis, std::size_t target_count) {
  if (static_cast<std::size_t>(basis.qubit_count()) != target_count) {
    throw std::invalid_argument("basis covers " + std::to_string(basis.qubit_count()) +
                                " qubits but " + std::to_string(target_count) +
                                " targets were given");
  }
}

}  // namespace

StateVector::StateVector(int num_qubits, Eigen::VectorXcd amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(num_qubits_);
  if (amps_.size() != Eigen::Index{1} << num_qubits_) {
    throw std::invalid_argument("amplitude vector has wrong dimension");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("state is not normalized");
  }
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  const auto dim = std::uint64_t{1} << num_qubits;
  if (index >= dim) {
    throw std::invalid_argument("basis-state index out of range");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

std::uint64_t StateVector::qubit_mask(int qubit) const {
  return std::uint64_t{1} << (num_qubits_ - qubit);
}

Unitary::Unitary(Eigen::MatrixXcd matrix, double tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw std::invalid_argument("unitary must be square");
  }
  const Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_;
  const double err =
      (gram - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff();
  if (err > tol) {
    throw std::invalid_argument("matrix is not unitary (max deviation " +
                                std::to_string(err) + ")");
  }
}

MeasurementBasis::MeasurementBasis(std::vector<StateVector> states,
                                   std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.empty()) {
    throw std::invalid_argument("basis has no states");
  }
  qubit_count_ = states_[0].num_qubits();
  if (states_.size() != std::size_t{1} << qubit_count_) {
    throw std::invalid_argument("basis must have 2^k states");
  }
  if (labels_.size() != states_.size()) {
    throw std::invalid_argument("one label per basis state required");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].num_qubits() != qubit_count_) {
      throw std::invalid_argument("basis states have mixed qubit counts");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex ip = inner_product(states_[i], states_[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expected) > kAlgebraTol) {
        throw std::invalid_argument("basis states are not orthonormal");
      }
    }
  }
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, double tol)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw std::invalid_argument("density matrix must be square");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > tol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  return DensityMatrix(state.amplitudes() * state.amplitudes().adjoint());
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int n = a.num_qubits() + b.num_qubits();
  if (n > kMaxQubits) {
    throw std::invalid_argument("tensor product exceeds the " +
                                std::to_string(kMaxQubits) + "-qubit kernel limit");
  }
  Eigen::VectorXcd amps(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    amps.segment(i * b.dim(), b.dim()) = a.amp(i) * b.amplitudes();
  }
  return StateVector(n, std::move(amps));
}

StateVector apply_unitary(const StateVector& state, const Unitary& u,
                          const std::vector<int>& targets) {
  const auto masks = target_masks(state, targets);
  const auto scatter = scatter_table(masks);
  if (u.dim() != static_cast<Eigen::Index>(scatter.size())) {
    throw std::invalid_argument("unitary dimension does not match target count");
  }
  const auto dim = static_cast<std::uint64_t>(state.dim());
  Eigen::VectorXcd out(state.dim());
  Eigen::VectorXcd sub(u.dim());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & masks.all) continue;
    for (std::size_t j = 0; j < scatter.size(); ++j) {
      sub(static_cast<Eigen::Index>(j)) = state.amp(base | scatter[j]);
    }
    const Eigen::VectorXcd mixed = u.matrix() * sub;
    for (std::size_t j = 0; j < scatter.size(); ++j) {
      out(static_cast<Eigen::Index>(base | scatter[j])) = mixed(static_cast<Eigen::Index>(j));
    }
  }
  return StateVector(state.num_qubits(), std::move(out));
}

std::vector<double> born_distribution(const StateVector& state,
                                      const std::vector<int>& targets,
                                      const MeasurementBasis& basis) {
  check_basis_matches(basis, targets.size());
  const auto masks = target_masks(state, targets);
  const auto scatter = scatter_table(masks);
  std::vector<double> probs(basis.size());
  for (std::size_t o = 0; o < basis.size(); ++o) {
    probs[o] = outcome_overlaps(state, scatter, masks.all, basis.state(o)).squaredNorm();
  }
  return probs;
}

std::pair<double, StateVector> project_onto(const StateVector& state,
                                            const std::vector<int>& targets,
                                            const MeasurementBasis& basis,
                                            std::size_t outcome) {
  check_basis_matches(basis, targets.size());
  if (outcome >= basis.size()) {
    throw std::invalid_argument("outcome index out of range");
  }
  const auto masks = target_masks(state, targets);
  const auto scatter = scatter_table(masks);
  const Eigen::VectorXcd c = outcome_overlaps(state, scatter, masks.all, basis.state(outcome));
  const double p = c.squaredNorm();
  if (p < kExactTol) {
    throw std::runtime_error("projection onto a zero-probability outcome");
  }
  const double inv = 1.0 / std::sqrt(p);
  const auto dim = static_cast<std::uint64_t>(state.dim());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.dim());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & masks.all) continue;
    const Complex scale = c(static_cast<Eigen::Index>(base)) * inv;
    for (std::size_t j = 0; j < scatter.size(); ++j) {
      out(static_cast<Eigen::Index>(base | scatter[j])) = basis.state(outcome).amp(j) * scale;
    }
  }
  return {p, StateVector(state.num_qubits(), std::move(out))};
}

MeasurementResult measure_subset(const StateVector& state, const std::vector<int>& targets,
                                 const MeasurementBasis& basis, Rng& rng) {
  std::vector<double> probs = born_distribution(state, targets, basis);
  std::vector<double> sampling = probs;
  double total = 0.0;
  for (double& p : sampling) {
    if (p < kExactTol) p = 0.0;
    total += p;
  }
  if (total <= 0.0) {
    throw std::runtime_error("no outcome has nonzero probability");
  }
  const double u = rng.uniform() * total;
  double cdf = 0.0;
  std::size_t chosen = sampling.size() - 1;
  for (std::size_t o = 0; o < sampling.size(); ++o) {
    cdf += sampling[o];
    if (u < cdf && sampling[o] > 0.0) {
      chosen = o;
      break;
    }
  }
  // Guard against landing on a zeroed tail outcome through rounding.
  while (sampling[chosen] == 0.0) --chosen;
  auto [p, collapsed] = project_onto(state, targets, basis, chosen);
  return MeasurementResult{chosen, basis.label(chosen), p, std::move(collapsed)};
}

DensityMatrix reduced_density(const StateVector& state, const std::vector<int>& keep) {
  const auto masks = target_masks(state, keep);
  const auto scatter = scatter_table(masks);
  const auto dim = static_cast<std::uint64_t>(state.dim());
  const auto out_dim = static_cast<Eigen::Index>(scatter.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & masks.all) continue;
    for (Eigen::Index i = 0; i < out_dim; ++i) {
      const Complex ai = state.amp(base | scatter[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < out_dim; ++j) {
        rho(i, j) += ai * std::conj(state.amp(base | scatter[static_cast<std::size_t>(j)]));
      }
    }
  }
  return DensityMatrix(std::move(rho));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("density matrices have different dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix() - b.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

Unitary random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("unitary dimension must be a power of two");
  }
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = Complex{rng.normal(), rng.normal()};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase correction makes the distribution Haar rather than QR-biased.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex{1.0, 0.0};
  }
  return Unitary(std::move(q));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("states have different dimensions");
  }
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left side
}

double max_amplitude_diff(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("states have different dimensions");
  }
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace sqkd
