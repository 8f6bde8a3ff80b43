#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>

#include "sqkd/statevector.hpp"
#include "sqkd/states.hpp"
#include "test_util.hpp"

using namespace sqkd;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Independent partial-trace oracle: pairs of global indices that agree on
// every discarded qubit contribute to the reduced matrix entry.
Eigen::MatrixXcd naive_partial_trace(const StateVector& state, const std::vector<int>& keep) {
  const int n = state.num_qubits();
  const auto dim = static_cast<std::uint64_t>(state.dim());
  const auto m = keep.size();
  std::uint64_t keep_mask = 0;
  for (int q : keep) keep_mask |= state.qubit_mask(q);
  auto kept_bits = [&](std::uint64_t g) {
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < m; ++b) {
      out <<= 1;
      out |= (g >> (n - keep[b])) & 1;
    }
    return out;
  };
  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Zero(Eigen::Index{1} << m, Eigen::Index{1} << m);
  for (std::uint64_t g1 = 0; g1 < dim; ++g1) {
    for (std::uint64_t g2 = 0; g2 < dim; ++g2) {
      if ((g1 & ~keep_mask) != (g2 & ~keep_mask)) continue;
      rho(static_cast<Eigen::Index>(kept_bits(g1)), static_cast<Eigen::Index>(kept_bits(g2))) +=
          state.amp(g1) * std::conj(state.amp(g2));
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("basis states place a single unit amplitude") {
  const StateVector s = StateVector::basis_state(3, 0b001);
  CHECK(s.amp(0b001) == Complex{1.0, 0.0});
  CHECK(s.amplitudes().cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(StateVector::basis_state(1, 0).amp(0) == Complex{1.0, 0.0});
  const StateVector all_ones = StateVector::basis_state(4, 0b1111);
  CHECK(all_ones.amp(0b1111) == Complex{1.0, 0.0});
  CHECK_THROWS_AS(StateVector::basis_state(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::basis_state(7, 0), std::invalid_argument);
}

TEST_CASE("tensor products compose registers high-order first") {
  const StateVector zero = StateVector::basis_state(1, 0);
  const StateVector one = StateVector::basis_state(1, 1);
  CHECK(tensor(zero, one).amp(0b01) == Complex{1.0, 0.0});

  // |psi+> x |0> = (|010> + |100>)/sqrt(2), expanded by hand.
  const StateVector psi0 = tensor(bell(BellLabel::psi_plus), zero);
  CHECK(psi0.amp(0b010).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(psi0.amp(0b100).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(std::abs(psi0.amp(0b000)) == doctest::Approx(0.0));

  // |G001> x |0>: support moves to {0010, 0100, 1000, 1110}.
  const StateVector g0 = tensor(ghz_like(GhzLikeLabel{0, 0, 1}), zero);
  for (std::uint64_t idx : {0b0010u, 0b0100u, 0b1000u, 0b1110u}) {
    CHECK(g0.amp(idx).real() == doctest::Approx(0.5).epsilon(1e-12));
  }

  CHECK_THROWS_AS(tensor(g0, tensor(zero, tensor(zero, zero))), std::invalid_argument);
}

TEST_CASE("apply_unitary acts on qubit subsets") {
  SUBCASE("bit flip on the first pair qubit maps psi+ to phi+") {
    const StateVector out = apply_unitary(bell(BellLabel::psi_plus), pauli(PauliLabel::sigma1), {1});
    CHECK(max_amplitude_diff(out, bell(BellLabel::phi_plus)) < 1e-12);
  }
  SUBCASE("identity leaves any state unchanged") {
    Rng rng(11);
    const StateVector s = testutil::random_state(3, rng);
    for (int q = 1; q <= 3; ++q) {
      CHECK(max_amplitude_diff(apply_unitary(s, pauli(PauliLabel::sigma0), {q}), s) < 1e-12);
    }
  }
  SUBCASE("CNOT(1->4) on |G001>|0> spreads the probe") {
    const StateVector in = tensor(ghz_like(GhzLikeLabel{0, 0, 1}), StateVector::basis_state(1, 0));
    const StateVector out = apply_unitary(in, cnot(), {1, 4});
    for (std::uint64_t idx : {0b0010u, 0b0100u, 0b1001u, 0b1111u}) {
      CHECK(out.amp(idx).real() == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(std::abs(out.amp(0b1000)) == doctest::Approx(0.0));
  }
  SUBCASE("errors") {
    const StateVector s = ghz_like(GhzLikeLabel{0, 0, 1});
    CHECK_THROWS_AS(apply_unitary(s, cnot(), {1}), std::invalid_argument);
    CHECK_THROWS_AS(apply_unitary(s, cnot(), {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(apply_unitary(s, cnot(), {3, 4}), std::invalid_argument);
  }
}

TEST_CASE("born distributions match hand-expanded projections") {
  SUBCASE("(|001>+|010>)/sqrt(2) splits over G001 and G111") {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
    amps(0b001) = kInvSqrt2;
    amps(0b010) = kInvSqrt2;
    const StateVector s(3, std::move(amps));
    const auto probs = born_distribution(s, {1, 2, 3}, ghz_like_basis());
    for (std::size_t o = 0; o < probs.size(); ++o) {
      const double expected = (o == 0b001 || o == 0b111) ? 0.5 : 0.0;
      CHECK(probs[o] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("phi+ is a Bell eigenstate") {
    const auto probs = born_distribution(bell(BellLabel::phi_plus), {1, 2}, bell_basis());
    CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("|00> = (phi+ + phi-)/sqrt(2)") {
    const auto probs = born_distribution(StateVector::basis_state(2, 0), {1, 2}, bell_basis());
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs[2] == doctest::Approx(0.0));
    CHECK(probs[3] == doctest::Approx(0.0));
  }
}

TEST_CASE("measure_subset collapses and keeps non-targets") {
  SUBCASE("Z on qubit 1 of |G001> yields both announced branches") {
    Eigen::VectorXcd b0 = Eigen::VectorXcd::Zero(8);
    b0(0b001) = kInvSqrt2;
    b0(0b010) = kInvSqrt2;
    Eigen::VectorXcd b1 = Eigen::VectorXcd::Zero(8);
    b1(0b100) = kInvSqrt2;
    b1(0b111) = kInvSqrt2;
    const StateVector branch0(3, std::move(b0));
    const StateVector branch1(3, std::move(b1));
    bool saw0 = false, saw1 = false;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
      Rng rng(seed);
      const MeasurementResult r = measure_subset(ghz_like(GhzLikeLabel{0, 0, 1}), {1}, z_basis(), rng);
      CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
      if (r.outcome == 0) {
        saw0 = true;
        CHECK(max_amplitude_diff(r.state, branch0) < 1e-12);
      } else {
        saw1 = true;
        CHECK(max_amplitude_diff(r.state, branch1) < 1e-12);
      }
    }
    CHECK(saw0);
    CHECK(saw1);
  }
  SUBCASE("GHZ-like measurement of |G001> is deterministic") {
    Rng rng(3);
    const MeasurementResult r =
        measure_subset(ghz_like(GhzLikeLabel{0, 0, 1}), {1, 2, 3}, ghz_like_basis(), rng);
    CHECK(r.label == "G001");
    CHECK(r.probability == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("a kept fake |0> against an entangled pair is uniform over four outcomes") {
    // Register: (1) fake |0>, (2) retained genuine particle, (3,4) pair.
    const StateVector joint =
        tensor(StateVector::basis_state(1, 0), ghz_like(GhzLikeLabel{0, 0, 1}));
    const auto probs = born_distribution(joint, {1, 3, 4}, ghz_like_basis());
    const std::vector<std::size_t> support{0b000, 0b001, 0b110, 0b111};
    for (std::size_t o = 0; o < probs.size(); ++o) {
      const bool in_support =
          std::find(support.begin(), support.end(), o) != support.end();
      CHECK(probs[o] == doctest::Approx(in_support ? 0.25 : 0.0).epsilon(1e-12));
    }
    Rng rng(7);
    std::map<std::string, int> counts;
    for (int i = 0; i < 4000; ++i) {
      counts[measure_subset(joint, {1, 3, 4}, ghz_like_basis(), rng).label]++;
    }
    CHECK(counts.size() == 4);
    for (const auto& [label, count] : counts) {
      CHECK(count > 800);  // 4000/4 +- well beyond 3 sigma
      CHECK(count < 1200);
    }
  }
  SUBCASE("zero-probability projection is rejected") {
    CHECK_THROWS_AS(project_onto(bell(BellLabel::phi_plus), {1, 2}, bell_basis(), 3),
                    std::runtime_error);
  }
}

TEST_CASE("measurement frequencies track the Born distribution") {
  Rng state_rng(5);
  const StateVector s = testutil::random_state(3, state_rng);
  const auto probs = born_distribution(s, {1, 2}, bell_basis());
  Rng rng(17);
  std::array<int, 4> counts{};
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    counts[measure_subset(s, {1, 2}, bell_basis(), rng).outcome]++;
  }
  for (std::size_t o = 0; o < counts.size(); ++o) {
    const double sigma = std::sqrt(probs[o] * (1.0 - probs[o]) * trials);
    CHECK(std::abs(counts[o] - probs[o] * trials) <= 3.0 * sigma + 1.0);
  }
}

TEST_CASE("collapse is idempotent per subset and basis") {
  Rng state_rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    const StateVector s = testutil::random_state(3, state_rng);
    Rng rng(100 + rep);
    const MeasurementResult first = measure_subset(s, {2, 3}, bell_basis(), rng);
    const MeasurementResult second = measure_subset(first.state, {2, 3}, bell_basis(), rng);
    CHECK(second.outcome == first.outcome);
    CHECK(second.probability == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("unitaries preserve norm and invert cleanly") {
  Rng rng(29);
  for (int rep = 0; rep < 10000; ++rep) {
    const StateVector s = testutil::random_state(3, rng);
    const int k = 1 + static_cast<int>(rng.below(2));
    std::vector<int> targets;
    if (k == 1) {
      targets = {1 + static_cast<int>(rng.below(3))};
    } else {
      const int first = 1 + static_cast<int>(rng.below(3));
      int second = 1 + static_cast<int>(rng.below(3));
      while (second == first) second = 1 + static_cast<int>(rng.below(3));
      targets = {first, second};
    }
    const Unitary u = random_unitary(Eigen::Index{1} << k, rng);
    const StateVector forward = apply_unitary(s, u, targets);
    CHECK(std::abs(forward.amplitudes().squaredNorm() - 1.0) <= 1e-10);
    if (rep % 10 == 0) {
      const StateVector back = apply_unitary(forward, u.adjoint(), targets);
      CHECK(max_amplitude_diff(back, s) < 1e-10);
    }
  }
}

TEST_CASE("reduced density matrices") {
  SUBCASE("product state reduces to the factor's projector") {
    const StateVector s = tensor(StateVector::basis_state(1, 0), bell(BellLabel::phi_plus));
    const DensityMatrix rho = reduced_density(s, {1});
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
    expected(0, 0) = 1.0;
    CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("half of phi+ is maximally mixed") {
    const DensityMatrix rho = reduced_density(bell(BellLabel::phi_plus), {1});
    CHECK((rho.matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("random product states over either factor") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
      const StateVector a = testutil::random_state(2, rng);
      const StateVector b = testutil::random_state(1, rng);
      const StateVector joint = tensor(a, b);
      const DensityMatrix rho = reduced_density(joint, {1, 2});
      CHECK((rho.matrix() - DensityMatrix::pure(a).matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("agrees with the pairwise-index oracle on random states") {
    Rng rng(37);
    for (int rep = 0; rep < 50; ++rep) {
      const StateVector s = testutil::random_state(4, rng);
      for (const std::vector<int>& keep :
           {std::vector<int>{2}, std::vector<int>{1, 3}, std::vector<int>{4, 2}}) {
        const DensityMatrix rho = reduced_density(s, keep);
        CHECK((rho.matrix() - naive_partial_trace(s, keep)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("trace distance") {
  const DensityMatrix zero = DensityMatrix::pure(StateVector::basis_state(1, 0));
  const DensityMatrix one = DensityMatrix::pure(StateVector::basis_state(1, 1));
  const DensityMatrix mixed(0.5 * Eigen::MatrixXcd::Identity(2, 2));
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
  // Eigenvalues of |0><0| - I/2 are +-1/2.
  CHECK(trace_distance(zero, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  const DensityMatrix big(0.25 * Eigen::MatrixXcd::Identity(4, 4));
  CHECK_THROWS_AS(trace_distance(zero, big), std::invalid_argument);
}

TEST_CASE("Haar-random unitaries") {
  SUBCASE("unitarity holds across many samples") {
    Rng rng(41);
    for (int rep = 0; rep < 1000; ++rep) {
      const Unitary u = random_unitary(4, rng);  // constructor checks U†U = I at 1e-10
      CHECK(u.dim() == 4);
    }
  }
  SUBCASE("first-entry moment matches 1/dim") {
    Rng rng(43);
    double acc = 0.0;
    const int samples = 10000;
    for (int rep = 0; rep < samples; ++rep) {
      acc += std::norm(random_unitary(2, rng).matrix()(0, 0));
    }
    CHECK(acc / samples == doctest::Approx(0.5).epsilon(0.04));  // +-0.02 absolute
  }
  SUBCASE("same seed, same matrix") {
    Rng a(97), b(97);
    const Unitary ua = random_unitary(8, a);
    const Unitary ub = random_unitary(8, b);
    CHECK((ua.matrix() - ub.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("dimension must be a power of two") {
    Rng rng(1);
    CHECK_THROWS_AS(random_unitary(3, rng), std::invalid_argument);
  }
}
