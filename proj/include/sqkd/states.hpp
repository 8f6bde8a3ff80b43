#pragma once

#include <string>

#include "sqkd/statevector.hpp"

namespace sqkd {

/// Label (a, b, c) of one of the eight GHZ-like tripartite basis states.
struct GhzLikeLabel {
  int a = 0;
  int b = 0;
  int c = 0;

  std::size_t index() const { return static_cast<std::size_t>(a * 4 + b * 2 + c); }
  std::string name() const;
  static GhzLikeLabel from_index(std::size_t index);
};

enum class BellLabel { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

enum class PauliLabel { sigma0, sigma1 };

std::string bell_name(BellLabel label);

/// The 3-qubit GHZ-like state |G_abc> with amplitudes ±1/2.
StateVector ghz_like(GhzLikeLabel label);

/// All eight GHZ-like states as a joint measurement basis, ordered by
/// (a, b, c) read as a binary index.
MeasurementBasis ghz_like_basis();

StateVector bell(BellLabel label);

/// Bell basis in the fixed outcome order (phi+, phi-, psi+, psi-).
MeasurementBasis bell_basis();

/// sigma0 = identity, sigma1 = bit flip.
Unitary pauli(PauliLabel label);

/// Single-qubit computational basis {|0>, |1>}.
MeasurementBasis z_basis();

/// Two-qubit CNOT; the first target qubit is the control.
Unitary cnot();

/// Checks |G001> = (|0>|psi+> + |1>|phi+>)/sqrt(2) within kExactTol.
bool verify_g001_decomposition();

// Outcome indices of the protocol's reference results in the bases above.
inline constexpr std::size_t kOutcomeG001 = 1;     // ghz_like_basis
inline constexpr std::size_t kOutcomePhiPlus = 0;  // bell_basis
inline constexpr std::size_t kOutcomePsiPlus = 2;  // bell_basis

}  // namespace sqkd
