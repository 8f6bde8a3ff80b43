#include "sqkd/postproc.hpp"

#include <algorithm>
#include <numeric>

#include "sqkd/protocol.hpp"
#include "sqkd/rng.hpp"

namespace sqkd {

namespace {

int parity_over(const BitString& bits, const std::vector<std::size_t>& idxs,
                std::size_t begin, std::size_t end) {
  int p = 0;
  for (std::size_t k = begin; k < end; ++k) {
    p ^= bits[idxs[k]];
  }
  return p;
}

// Binary search for the single flipped bit inside idxs[lo, hi); discloses
// one parity per halving. Assumes the range holds an odd number of errors.
void correct_block(const BitString& alice, BitString& bob,
                   const std::vector<std::size_t>& idxs, std::size_t lo, std::size_t hi,
                   std::size_t& leaked) {
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    ++leaked;
    if (parity_over(alice, idxs, lo, mid) != parity_over(bob, idxs, lo, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  bob[idxs[lo]] ^= 1;
}

void parity_pass(const BitString& alice, BitString& bob,
                 const std::vector<std::size_t>& idxs, std::size_t block_size,
                 std::size_t& leaked) {
  for (std::size_t start = 0; start < idxs.size(); start += block_size) {
    const std::size_t end = std::min(start + block_size, idxs.size());
    ++leaked;
    if (parity_over(alice, idxs, start, end) != parity_over(bob, idxs, start, end)) {
      correct_block(alice, bob, idxs, start, end, leaked);
    }
  }
}

}  // namespace

ReconcileResult reconcile(const BitString& alice, const BitString& bob,
                          const PostprocConfig& config) {
  if (alice.size() != bob.size()) {
    throw std::invalid_argument("reconcile requires equal-length strings");
  }
  if (config.block_size < 1) {
    throw std::invalid_argument("block size must be positive");
  }
  ReconcileResult result{bob, 0};
  if (alice.empty()) {
    return result;
  }

  std::vector<std::size_t> idxs(alice.size());
  std::iota(idxs.begin(), idxs.end(), std::size_t{0});
  parity_pass(alice, result.bits, idxs, config.block_size, result.leaked);
  if (result.bits == alice) {
    return result;
  }

  // Second pass over a seeded permutation, to split error pairs that fell
  // into one pass-1 block.
  Rng perm_rng(config.hash_seed ^ 0x7265636f6e32ull);
  for (std::size_t i = idxs.size() - 1; i > 0; --i) {
    std::swap(idxs[i], idxs[perm_rng.below(i + 1)]);
  }
  parity_pass(alice, result.bits, idxs, config.block_size, result.leaked);
  if (result.bits != alice) {
    throw ReconciliationError("residual mismatch after two reconciliation passes");
  }
  return result;
}

BitString privacy_amplify(const BitString& bits, std::size_t leaked, std::size_t m,
                          std::uint64_t hash_seed) {
  const std::size_t len = bits.size();
  if (m > len || m + leaked > len) {
    throw std::invalid_argument("requested key length exceeds len(bits) - leaked");
  }
  if (m == 0) {
    return {};
  }
  // Toeplitz diagonals t: entry (i, j) = t[i - j + len - 1].
  Rng rng(hash_seed);
  std::vector<std::uint8_t> t(m + len - 1);
  for (auto& v : t) {
    v = static_cast<std::uint8_t>(rng.bit());
  }
  BitString key(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < len; ++j) {
      acc ^= static_cast<std::uint8_t>(t[i + len - 1 - j] & bits[j]);
    }
    key[i] = acc;
  }
  return key;
}

EfficiencyAccount qubit_efficiency(long long n, long long delta, long long nu) {
  if (n < 1 || delta < 1 || nu < 1) {
    throw std::invalid_argument("n, delta, nu must be positive");
  }
  EfficiencyAccount acc;
  acc.n = n;
  acc.delta = delta;
  acc.nu = nu;
  acc.lambda_b = 3 * n + 2 * nu;
  acc.gamma_q = 15 * n + 14 * delta + 15 * nu;
  acc.gamma_c = 0;
  acc.eta = static_cast<double>(acc.lambda_b) / static_cast<double>(acc.gamma_q + acc.gamma_c);
  return acc;
}

QubitTally count_consumed_qubits(const SessionResult& session) {
  QubitTally tally;
  tally.aborted = session.detected;
  for (const RoundRecord& rec : session.records) {
    if (rec.phase == 1) {
      tally.total += 3;  // one GHZ-like state prepared per phase-1 round
    }
    if (rec.action == BobAction::sift) {
      tally.total += 1;  // Bob's fresh particle
    }
  }
  return tally;
}

std::string bits_to_hex(const BitString& bits) {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  hex.reserve((bits.size() + 7) / 8 * 2);
  for (std::size_t start = 0; start < bits.size(); start += 8) {
    unsigned byte = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      byte <<= 1;
      if (start + k < bits.size()) {
        byte |= bits[start + k];
      }
    }
    hex.push_back(digits[byte >> 4]);
    hex.push_back(digits[byte & 0xf]);
  }
  return hex;
}

}  // namespace sqkd
