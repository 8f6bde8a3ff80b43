#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "sqkd/statevector.hpp"
#include "sqkd/states.hpp"

using namespace sqkd;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// The eight tripartite states, frozen exactly as defined: four amplitudes
// of +-1/2 each.
struct Expected {
  std::array<int, 4> support;
  std::array<double, 4> amp;
};

const std::array<Expected, 8> kExpected{{
    {{0b000, 0b011, 0b101, 0b110}, {0.5, 0.5, 0.5, 0.5}},      // G000
    {{0b001, 0b010, 0b100, 0b111}, {0.5, 0.5, 0.5, 0.5}},      // G001
    {{0b000, 0b011, 0b101, 0b110}, {0.5, -0.5, -0.5, 0.5}},    // G010
    {{0b001, 0b010, 0b100, 0b111}, {0.5, -0.5, -0.5, 0.5}},    // G011
    {{0b000, 0b011, 0b101, 0b110}, {0.5, -0.5, 0.5, -0.5}},    // G100
    {{0b001, 0b010, 0b100, 0b111}, {0.5, -0.5, 0.5, -0.5}},    // G101
    {{0b000, 0b011, 0b101, 0b110}, {0.5, 0.5, -0.5, -0.5}},    // G110
    {{0b001, 0b010, 0b100, 0b111}, {0.5, 0.5, -0.5, -0.5}},    // G111
}};

}  // namespace

TEST_CASE("GHZ-like states carry the exact printed amplitudes") {
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const StateVector s = ghz_like(GhzLikeLabel::from_index(idx));
    const Expected& e = kExpected[idx];
    int nonzero = 0;
    for (std::uint64_t i = 0; i < 8; ++i) {
      if (std::abs(s.amp(i)) > 0.0) ++nonzero;
    }
    CHECK(nonzero == 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(s.amp(static_cast<std::uint64_t>(e.support[k])).real() ==
            doctest::Approx(e.amp[k]).epsilon(1e-15));
      CHECK(s.amp(static_cast<std::uint64_t>(e.support[k])).imag() == 0.0);
    }
  }
}

TEST_CASE("all 64 GHZ-like inner products are orthonormal") {
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const Complex ip = inner_product(ghz_like(GhzLikeLabel::from_index(i)),
                                       ghz_like(GhzLikeLabel::from_index(j)));
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("GHZ-like basis is complete") {
  const MeasurementBasis basis = ghz_like_basis();
  CHECK(basis.size() == 8);
  CHECK(basis.label(0b001) == "G001");
  // Sum of projections of |000> over all outcomes is 1.
  double total = 0.0;
  for (std::size_t o = 0; o < 8; ++o) {
    total += std::norm(inner_product(basis.state(o), StateVector::basis_state(3, 0)));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const auto probs = born_distribution(ghz_like(GhzLikeLabel{0, 0, 1}), {1, 2, 3}, basis);
  for (std::size_t o = 0; o < 8; ++o) {
    CHECK(probs[o] == doctest::Approx(o == 0b001 ? 1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("Bell states and basis") {
  const StateVector psi = bell(BellLabel::psi_plus);
  CHECK(psi.amp(0b01).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(psi.amp(0b10).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  const StateVector phi = bell(BellLabel::phi_plus);
  CHECK(phi.amp(0b00).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(phi.amp(0b11).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));

  const MeasurementBasis basis = bell_basis();  // constructor enforces Gram = I4
  CHECK(basis.size() == 4);
  CHECK(basis.label(kOutcomePhiPlus) == "phi+");
  CHECK(basis.label(kOutcomePsiPlus) == "psi+");

  // Flipping the first pair qubit exchanges psi+ and phi+.
  const StateVector flipped = apply_unitary(psi, pauli(PauliLabel::sigma1), {1});
  CHECK(max_amplitude_diff(flipped, phi) < 1e-12);
}

TEST_CASE("Pauli operations and the Z basis") {
  const Unitary flip = pauli(PauliLabel::sigma1);
  const StateVector one = apply_unitary(StateVector::basis_state(1, 0), flip, {1});
  CHECK(max_amplitude_diff(one, StateVector::basis_state(1, 1)) < 1e-15);

  const Unitary identity = pauli(PauliLabel::sigma0);
  CHECK((identity.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((flip.matrix() * flip.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);

  const MeasurementBasis z = z_basis();
  CHECK(z.size() == 2);
  CHECK(z.label(0) == "0");
  CHECK(z.label(1) == "1");
}

TEST_CASE("|G001> splits over the flying qubit as |0>psi+ + |1>phi+") {
  CHECK(verify_g001_decomposition());

  const StateVector lhs = ghz_like(GhzLikeLabel{0, 0, 1});
  const Eigen::VectorXcd rhs =
      kInvSqrt2 *
      (tensor(StateVector::basis_state(1, 0), bell(BellLabel::psi_plus)).amplitudes() +
       tensor(StateVector::basis_state(1, 1), bell(BellLabel::phi_plus)).amplitudes());
  CHECK((lhs.amplitudes() - rhs).norm() < 1e-12);

  // The swapped pairing builds G000 instead; nowhere near G001.
  const Eigen::VectorXcd swapped =
      kInvSqrt2 *
      (tensor(StateVector::basis_state(1, 0), bell(BellLabel::phi_plus)).amplitudes() +
       tensor(StateVector::basis_state(1, 1), bell(BellLabel::psi_plus)).amplitudes());
  CHECK((lhs.amplitudes() - swapped).norm() > 1e-12);
  CHECK((ghz_like(GhzLikeLabel{0, 0, 0}).amplitudes() - swapped).norm() < 1e-12);
}

TEST_CASE("bit flip on qubit 1 of |G001> exchanges the pair correlation") {
  const StateVector flipped =
      apply_unitary(ghz_like(GhzLikeLabel{0, 0, 1}), pauli(PauliLabel::sigma1), {1});
  CHECK(std::abs(flipped.amplitudes().norm() - 1.0) < 1e-12);
  const Eigen::VectorXcd expected =
      kInvSqrt2 *
      (tensor(StateVector::basis_state(1, 1), bell(BellLabel::psi_plus)).amplitudes() +
       tensor(StateVector::basis_state(1, 0), bell(BellLabel::phi_plus)).amplitudes());
  CHECK((flipped.amplitudes() - expected).norm() < 1e-12);
}

TEST_CASE("GHZ-like labels round-trip") {
  for (std::size_t i = 0; i < 8; ++i) {
    const GhzLikeLabel label = GhzLikeLabel::from_index(i);
    CHECK(label.index() == i);
    CHECK(label.name().size() == 4);
  }
  CHECK(GhzLikeLabel{1, 0, 1}.name() == "G101");
  CHECK_THROWS_AS(GhzLikeLabel::from_index(8), std::invalid_argument);
}
