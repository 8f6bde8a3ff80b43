#include "sqkd/states.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace sqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Support and signs of each |G_abc>, indexed by abc. Every state has four
// amplitudes of magnitude 1/2 on either the even-parity or odd-parity
// half of the computational basis.
struct GhzEntry {
  std::array<int, 4> support;
  std::array<int, 4> sign;
};

constexpr std::array<GhzEntry, 8> kGhzTable{{
    {{0b000, 0b011, 0b101, 0b110}, {+1, +1, +1, +1}},  // G000
    {{0b001, 0b010, 0b100, 0b111}, {+1, +1, +1, +1}},  // G001
    {{0b000, 0b011, 0b101, 0b110}, {+1, -1, -1, +1}},  // G010
    {{0b001, 0b010, 0b100, 0b111}, {+1, -1, -1, +1}},  // G011
    {{0b000, 0b011, 0b101, 0b110}, {+1, -1, +1, -1}},  // G100
    {{0b001, 0b010, 0b100, 0b111}, {+1, -1, +1, -1}},  // G101
    {{0b000, 0b011, 0b101, 0b110}, {+1, +1, -1, -1}},  // G110
    {{0b001, 0b010, 0b100, 0b111}, {+1, +1, -1, -1}},  // G111
}};

}  // namespace

std::string GhzLikeLabel::name() const {
  return "G" + std::to_string(a) + std::to_string(b) + std::to_string(c);
}

GhzLikeLabel GhzLikeLabel::from_index(std::size_t index) {
  if (index > 7) {
    throw std::invalid_argument("GHZ-like label index out of range");
  }
  return GhzLikeLabel{static_cast<int>(index >> 2 & 1), static_cast<int>(index >> 1 & 1),
                      static_cast<int>(index & 1)};
}

std::string bell_name(BellLabel label) {
  switch (label) {
    case BellLabel::phi_plus:
      return "phi+";
    case BellLabel::phi_minus:
      return "phi-";
    case BellLabel::psi_plus:
      return "psi+";
    case BellLabel::psi_minus:
      return "psi-";
  }
  throw std::invalid_argument("unknown Bell label");
}

StateVector ghz_like(GhzLikeLabel label) {
  if ((label.a | label.b | label.c) < 0 || label.a > 1 || label.b > 1 || label.c > 1) {
    throw std::invalid_argument("GHZ-like label bits must be 0 or 1");
  }
  const GhzEntry& entry = kGhzTable[label.index()];
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  for (int i = 0; i < 4; ++i) {
    amps(entry.support[i]) = 0.5 * entry.sign[i];
  }
  return StateVector(3, std::move(amps));
}

MeasurementBasis ghz_like_basis() {
  std::vector<StateVector> states;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < 8; ++i) {
    const GhzLikeLabel label = GhzLikeLabel::from_index(i);
    states.push_back(ghz_like(label));
    labels.push_back(label.name());
  }
  return MeasurementBasis(std::move(states), std::move(labels));
}

StateVector bell(BellLabel label) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  switch (label) {
    case BellLabel::phi_plus:
      amps(0b00) = kInvSqrt2;
      amps(0b11) = kInvSqrt2;
      break;
    case BellLabel::phi_minus:
      amps(0b00) = kInvSqrt2;
      amps(0b11) = -kInvSqrt2;
      break;
    case BellLabel::psi_plus:
      amps(0b01) = kInvSqrt2;
      amps(0b10) = kInvSqrt2;
      break;
    case BellLabel::psi_minus:
      amps(0b01) = kInvSqrt2;
      amps(0b10) = -kInvSqrt2;
      break;
  }
  return StateVector(2, std::move(amps));
}

MeasurementBasis bell_basis() {
  std::vector<StateVector> states;
  std::vector<std::string> labels;
  for (BellLabel label : {BellLabel::phi_plus, BellLabel::phi_minus, BellLabel::psi_plus,
                          BellLabel::psi_minus}) {
    states.push_back(bell(label));
    labels.push_back(bell_name(label));
  }
  return MeasurementBasis(std::move(states), std::move(labels));
}

Unitary pauli(PauliLabel label) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  if (label == PauliLabel::sigma0) {
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
  } else {
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
  }
  return Unitary(std::move(m));
}

MeasurementBasis z_basis() {
  std::vector<StateVector> states{StateVector::basis_state(1, 0),
                                  StateVector::basis_state(1, 1)};
  return MeasurementBasis(std::move(states), {"0", "1"});
}

Unitary cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0b00, 0b00) = 1.0;
  m(0b01, 0b01) = 1.0;
  m(0b11, 0b10) = 1.0;
  m(0b10, 0b11) = 1.0;
  return Unitary(std::move(m));
}

bool verify_g001_decomposition() {
  const StateVector lhs = ghz_like(GhzLikeLabel{0, 0, 1});
  const Eigen::VectorXcd rhs =
      kInvSqrt2 * (tensor(StateVector::basis_state(1, 0), bell(BellLabel::psi_plus)).amplitudes() +
                   tensor(StateVector::basis_state(1, 1), bell(BellLabel::phi_plus)).amplitudes());
  return (lhs.amplitudes() - rhs).norm() < kExactTol;
}

}  // namespace sqkd
