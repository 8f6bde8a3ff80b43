#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqkd {

/// One byte per bit, values 0/1.
using BitString = std::vector<std::uint8_t>;

struct PostprocConfig {
  std::size_t block_size = 8;
  /// Final key length m; when unset, len(info) - leaked - 32, clamped at 0.
  std::optional<std::size_t> output_length;
  std::uint64_t hash_seed = 0;
};

struct ReconcileResult {
  BitString bits;        // Bob's string corrected toward Alice's
  std::size_t leaked = 0;  // parity bits disclosed on the public channel
};

/// Residual mismatch after both reconciliation passes.
class ReconciliationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-pass block-parity reconciliation. Pass 1 compares block parities in
/// natural order and binary-searches each mismatched block; pass 2 repeats
/// over a permutation seeded from hash_seed and only runs if the strings
/// still differ. Every disclosed parity counts toward `leaked`.
ReconcileResult reconcile(const BitString& alice, const BitString& bob,
                          const PostprocConfig& config);

/// Seeded random Toeplitz hash over GF(2): m x len(bits) matrix times the
/// bit vector. Requires m <= len(bits) - leaked.
BitString privacy_amplify(const BitString& bits, std::size_t leaked, std::size_t m,
                          std::uint64_t hash_seed);

struct EfficiencyAccount {
  long long n = 0;
  long long delta = 0;
  long long nu = 0;
  long long lambda_b = 0;  // INFO bits
  long long gamma_q = 0;   // consumed qubits
  long long gamma_c = 0;   // classical communication bits
  double eta = 0.0;        // lambda_b / (gamma_q + gamma_c)
};

/// Cabello qubit-efficiency account: lambda_b = 3n + 2nu,
/// gamma_q = 15n + 14delta + 15nu, gamma_c = 0.
EfficiencyAccount qubit_efficiency(long long n, long long delta, long long nu);

struct SessionResult;

struct QubitTally {
  std::size_t total = 0;
  bool aborted = false;
};

/// Qubits consumed by a session, tallied from its transcript: three per
/// prepared GHZ-like state plus one fresh particle per SIFT in each phase.
/// Matches 15n + 14delta + 15nu for a completed honest session.
QubitTally count_consumed_qubits(const SessionResult& session);

/// Lowercase hex; bits are packed MSB-first, the last byte zero-padded.
std::string bits_to_hex(const BitString& bits);

}  // namespace sqkd
