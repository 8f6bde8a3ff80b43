#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sqkd/postproc.hpp"
#include "sqkd/rng.hpp"
#include "sqkd/statevector.hpp"

namespace sqkd {

struct AttackStrategy;

/// Session sizing: n key-source rounds, delta phase-1 check budget,
/// nu phase-2 budget, and the master seed for all session randomness.
struct ProtocolParams {
  int n = 16;
  int delta = 4;
  int nu = 4;
  std::uint64_t seed = 0;

  void validate() const;

  int phase1_rounds() const { return 4 * (n + delta + nu); }
  int phase1_ctrl_count() const { return 2 * (n + delta + nu); }
  int phase1_check_count() const { return 2 * delta; }
  int phase1_survivors() const { return 2 * (n + nu); }
  int phase2_rounds() const { return 2 * (n + nu); }
  int phase2_ctrl_count() const { return n + nu; }
  int phase2_check_count() const { return nu; }
  int info_bits() const { return 3 * n + 2 * nu; }
};

enum class BobAction { ctrl, sift };

std::string bob_action_name(BobAction action);

struct RoundRecord {
  int position = 0;  // index within its phase
  int phase = 1;
  BobAction action = BobAction::ctrl;
  std::optional<int> bob_bit;  // SIFT only
  bool checked = false;
  std::optional<bool> check_passed;          // present iff checked
  std::optional<std::string> alice_outcome;  // basis label(s), present iff checked
  bool kept_for_key = false;
};

struct KeyMaterial {
  BitString m_a1;  // length 2(n+nu)
  BitString m_b1;
  BitString m_a2;  // length n
  BitString m_b2;

  BitString info_alice() const;  // m_a1 || m_a2
  BitString info_bob() const;    // m_b1 || m_b2
};

struct SessionResult {
  ProtocolParams params;
  std::vector<RoundRecord> records;
  bool detected = false;
  std::optional<int> detection_phase;
  std::optional<KeyMaterial> key_material;  // present iff not detected
  std::optional<BitString> final_key;
  std::size_t leaked_bits = 0;
  bool reconciliation_failed = false;
  /// Max trace distance of Eve's probe from its initial state across
  /// attacked rounds, taken after the return leg. 0 for probe-free runs.
  double max_probe_deviation = 0.0;
};

/// Exactly ctrl_count positions become CTRL, chosen uniformly at random.
std::vector<BobAction> plan_bob_actions(int total_positions, int ctrl_count, Rng& rng);

struct BobActResult {
  StateVector state;
  std::optional<int> bit;
};

/// CTRL reflects the state unchanged; SIFT measures the flying qubit in
/// the Z basis. The projective collapse leaves that qubit in a product
/// computational state, which already is the fresh particle Bob resends.
BobActResult bob_act(const StateVector& state, int flying_qubit, BobAction action, Rng& rng);

struct CheckResult {
  bool passed = false;
  std::string outcome;
};

/// Phase-1 CTRL check: GHZ-like measurement of qubits (1,2,3), pass iff G001.
CheckResult alice_check_ctrl_phase1(const StateVector& state, Rng& rng);

/// Phase-1 SIFT check: Z on qubit 1 and Bell on (2,3). Passes iff Alice's
/// bit equals Bob's and the pair reads psi+ for bit 0, phi+ for bit 1.
CheckResult alice_check_sift_phase1(const StateVector& state, int bob_bit, Rng& rng);

/// Phase-2 CTRL check: Bell measurement of the pair, pass iff phi+.
CheckResult alice_check_ctrl_phase2(const StateVector& state, std::array<int, 2> pair,
                                    Rng& rng);

/// Phase-2 SIFT check: Z on both pair qubits, pass iff both equal Bob's bit.
CheckResult alice_check_sift_phase2(const StateVector& state, std::array<int, 2> pair,
                                    int bob_bit, Rng& rng);

/// Step-5 rule keyed to Alice's key bit: bit flip on the outgoing pair
/// qubit when the bit is 0, identity when it is 1. Honest pairs end phi+.
StateVector alice_apply_correction(const StateVector& state, int pair_first_qubit,
                                   int alice_key_bit);

struct SiftPhase1Result {
  BitString m_a1;
  BitString m_b1;
  std::vector<StateVector> survivor_states;  // after Alice's Z on qubit 1
  std::vector<int> survivor_positions;
};

/// Step 4: drops CTRL and checked positions, reads M_B1 from Bob's bits,
/// and has Alice Z-measure qubit 1 of each survivor to build M_A1. Marks
/// kept_for_key on the surviving records. Throws on a survivor count that
/// contradicts the params (bookkeeping bug).
SiftPhase1Result sift_phase1(std::vector<RoundRecord>& records,
                             const std::vector<StateVector>& round_states,
                             const ProtocolParams& params, Rng& rng);

/// Runs Steps 1-9: both transmission phases, all checks, sifting, and
/// post-processing. A failed check sets detected/detection_phase, keeps the
/// transcript, and suppresses key material. Uses PostprocConfig defaults
/// derived from the session seed when `postproc` is not given.
SessionResult run_session(const ProtocolParams& params, const AttackStrategy& attack,
                          const std::optional<PostprocConfig>& postproc = std::nullopt);

/// One RoundRecord per line, key=value fields, "-" for absent optionals.
std::string serialize_record(const RoundRecord& record);
RoundRecord parse_record(const std::string& line);
std::string serialize_transcript(const std::vector<RoundRecord>& records);
std::vector<RoundRecord> parse_transcript(const std::string& text);

}  // namespace sqkd
