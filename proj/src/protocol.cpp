#include "sqkd/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sqkd/adversary.hpp"
#include "sqkd/states.hpp"

namespace sqkd {

namespace {

const MeasurementBasis& shared_z_basis() {
  static const MeasurementBasis basis = z_basis();
  return basis;
}

const MeasurementBasis& shared_bell_basis() {
  static const MeasurementBasis basis = bell_basis();
  return basis;
}

const MeasurementBasis& shared_ghz_basis() {
  static const MeasurementBasis basis = ghz_like_basis();
  return basis;
}

// Uniform k-subset of positions, ascending.
std::vector<int> sample_positions(const std::vector<int>& pool, std::size_t k, Rng& rng) {
  if (k > pool.size()) {
    throw std::invalid_argument("cannot sample more positions than available");
  }
  std::vector<int> shuffled = pool;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(shuffled.size() - i);
    std::swap(shuffled[i], shuffled[j]);
  }
  shuffled.resize(k);
  std::sort(shuffled.begin(), shuffled.end());
  return shuffled;
}

int measure_bit(const StateVector& state, int qubit, Rng& rng, StateVector& collapsed_out) {
  MeasurementResult r = measure_subset(state, {qubit}, shared_z_basis(), rng);
  collapsed_out = std::move(r.state);
  return static_cast<int>(r.outcome);
}

std::string opt_field(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "-";
}

std::string opt_field(const std::optional<bool>& v) {
  return v ? std::to_string(static_cast<int>(*v)) : "-";
}

std::string field_value(const std::string& token, const char* key) {
  const std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("malformed transcript token, expected " + prefix +
                                "...: " + token);
  }
  return token.substr(prefix.size());
}

}  // namespace

void ProtocolParams::validate() const {
  if (n < 1 || delta < 1 || nu < 1) {
    throw std::invalid_argument("n, delta, nu must all be >= 1");
  }
}

std::string bob_action_name(BobAction action) {
  return action == BobAction::ctrl ? "CTRL" : "SIFT";
}

BitString KeyMaterial::info_alice() const {
  BitString info = m_a1;
  info.insert(info.end(), m_a2.begin(), m_a2.end());
  return info;
}

BitString KeyMaterial::info_bob() const {
  BitString info = m_b1;
  info.insert(info.end(), m_b2.begin(), m_b2.end());
  return info;
}

std::vector<BobAction> plan_bob_actions(int total_positions, int ctrl_count, Rng& rng) {
  if (total_positions < 0 || ctrl_count < 0 || ctrl_count > total_positions) {
    throw std::invalid_argument("ctrl_count must lie in [0, total_positions]");
  }
  std::vector<int> pool(total_positions);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<BobAction> plan(total_positions, BobAction::sift);
  for (int pos : sample_positions(pool, static_cast<std::size_t>(ctrl_count), rng)) {
    plan[pos] = BobAction::ctrl;
  }
  return plan;
}

BobActResult bob_act(const StateVector& state, int flying_qubit, BobAction action, Rng& rng) {
  if (action == BobAction::ctrl) {
    return BobActResult{state, std::nullopt};
  }
  StateVector collapsed = state;
  const int bit = measure_bit(state, flying_qubit, rng, collapsed);
  return BobActResult{std::move(collapsed), bit};
}

CheckResult alice_check_ctrl_phase1(const StateVector& state, Rng& rng) {
  MeasurementResult r = measure_subset(state, {1, 2, 3}, shared_ghz_basis(), rng);
  return CheckResult{r.outcome == kOutcomeG001, r.label};
}

CheckResult alice_check_sift_phase1(const StateVector& state, int bob_bit, Rng& rng) {
  StateVector collapsed = state;
  const int alice_bit = measure_bit(state, 1, rng, collapsed);
  MeasurementResult pair = measure_subset(collapsed, {2, 3}, shared_bell_basis(), rng);
  const std::size_t expected = bob_bit == 0 ? kOutcomePsiPlus : kOutcomePhiPlus;
  const bool passed = alice_bit == bob_bit && pair.outcome == expected;
  return CheckResult{passed, std::to_string(alice_bit) + ";" + pair.label};
}

CheckResult alice_check_ctrl_phase2(const StateVector& state, std::array<int, 2> pair,
                                    Rng& rng) {
  MeasurementResult r = measure_subset(state, {pair[0], pair[1]}, shared_bell_basis(), rng);
  return CheckResult{r.outcome == kOutcomePhiPlus, r.label};
}

CheckResult alice_check_sift_phase2(const StateVector& state, std::array<int, 2> pair,
                                    int bob_bit, Rng& rng) {
  StateVector collapsed = state;
  const int returned_bit = measure_bit(state, pair[0], rng, collapsed);
  StateVector collapsed2 = collapsed;
  const int retained_bit = measure_bit(collapsed, pair[1], rng, collapsed2);
  const bool passed = returned_bit == bob_bit && retained_bit == bob_bit;
  return CheckResult{passed,
                     std::to_string(returned_bit) + ";" + std::to_string(retained_bit)};
}

StateVector alice_apply_correction(const StateVector& state, int pair_first_qubit,
                                   int alice_key_bit) {
  const PauliLabel op = alice_key_bit == 0 ? PauliLabel::sigma1 : PauliLabel::sigma0;
  return apply_unitary(state, pauli(op), {pair_first_qubit});
}

SiftPhase1Result sift_phase1(std::vector<RoundRecord>& records,
                             const std::vector<StateVector>& round_states,
                             const ProtocolParams& params, Rng& rng) {
  if (records.size() != round_states.size()) {
    throw std::invalid_argument("records and round states are misaligned");
  }
  SiftPhase1Result out;
  for (std::size_t t = 0; t < records.size(); ++t) {
    RoundRecord& rec = records[t];
    if (rec.action != BobAction::sift || rec.checked) {
      continue;
    }
    if (!rec.bob_bit) {
      throw std::logic_error("SIFT round lost its measured bit");
    }
    rec.kept_for_key = true;
    out.m_b1.push_back(static_cast<std::uint8_t>(*rec.bob_bit));
    StateVector collapsed = round_states[t];
    const int alice_bit = measure_bit(round_states[t], 1, rng, collapsed);
    out.m_a1.push_back(static_cast<std::uint8_t>(alice_bit));
    out.survivor_states.push_back(std::move(collapsed));
    out.survivor_positions.push_back(rec.position);
  }
  if (out.m_b1.size() != static_cast<std::size_t>(params.phase1_survivors())) {
    throw std::logic_error("phase-1 survivor count does not match the parameters");
  }
  return out;
}

SessionResult run_session(const ProtocolParams& params, const AttackStrategy& attack,
                          const std::optional<PostprocConfig>& postproc) {
  params.validate();
  SessionResult result;
  result.params = params;
  Rng rng(params.seed);

  const bool attack1 = attack.applies_to_phase(1);
  const bool attack2 = attack.applies_to_phase(2);
  const int probe_count = attack.probe_qubit_count();
  const std::optional<DensityMatrix> probe_reference = attack.initial_probe_density();
  auto note_probe_deviation = [&](const StateVector& state) {
    if (!probe_reference) return;
    std::vector<int> probe_qubits;
    for (int q = state.num_qubits() - probe_count + 1; q <= state.num_qubits(); ++q) {
      probe_qubits.push_back(q);
    }
    result.max_probe_deviation =
        std::max(result.max_probe_deviation,
                 trace_distance(reduced_density(state, probe_qubits), *probe_reference));
  };

  // Phase 1: the S1 round trip. Each position is an independent 3-qubit
  // system (plus Eve's registers); the flying particle is qubit 1.
  const int r1 = params.phase1_rounds();
  std::vector<BobAction> plan1 = plan_bob_actions(r1, params.phase1_ctrl_count(), rng);
  std::vector<StateVector> states1;
  states1.reserve(r1);
  std::vector<RoundRecord> rec1(r1);
  for (int t = 0; t < r1; ++t) {
    StateVector s = ghz_like(GhzLikeLabel{0, 0, 1});
    if (attack1) {
      s = attach_probe(attack, s);
      s = attack_forward(attack, s, 1, rng);
    }
    BobActResult acted = bob_act(s, 1, plan1[t], rng);
    StateVector back = attack1 ? attack_return(attack, acted.state, 1, rng)
                               : std::move(acted.state);
    if (attack1) {
      note_probe_deviation(back);
    }
    rec1[t] = RoundRecord{t, 1, plan1[t], acted.bit, false, std::nullopt, std::nullopt, false};
    states1.push_back(std::move(back));
  }

  // Step 3: GHZ-like check on every CTRL position, Z+Bell check on 2*delta
  // randomly chosen SIFT positions.
  bool phase1_failed = false;
  std::vector<int> sift_positions1;
  for (int t = 0; t < r1; ++t) {
    if (plan1[t] == BobAction::ctrl) {
      CheckResult check = alice_check_ctrl_phase1(states1[t], rng);
      rec1[t].checked = true;
      rec1[t].check_passed = check.passed;
      rec1[t].alice_outcome = check.outcome;
      phase1_failed |= !check.passed;
    } else {
      sift_positions1.push_back(t);
    }
  }
  for (int t : sample_positions(sift_positions1,
                                static_cast<std::size_t>(params.phase1_check_count()), rng)) {
    CheckResult check = alice_check_sift_phase1(states1[t], *rec1[t].bob_bit, rng);
    rec1[t].checked = true;
    rec1[t].check_passed = check.passed;
    rec1[t].alice_outcome = check.outcome;
    phase1_failed |= !check.passed;
  }
  if (phase1_failed) {
    result.records = std::move(rec1);
    result.detected = true;
    result.detection_phase = 1;
    return result;
  }

  // Step 4 sifting, then the Step-5 correction keyed to M_A1.
  SiftPhase1Result sifted = sift_phase1(rec1, states1, params, rng);
  states1.clear();
  for (std::size_t i = 0; i < sifted.survivor_states.size(); ++i) {
    sifted.survivor_states[i] =
        alice_apply_correction(sifted.survivor_states[i], 2, sifted.m_a1[i]);
  }

  // Phase 2: the corrected pair qubit flies; Alice keeps qubit 3. Any
  // phase-1 registers (collapsed S1 qubit, Eve's probes) ride along.
  const int r2 = params.phase2_rounds();
  if (static_cast<int>(sifted.survivor_states.size()) != r2) {
    throw std::logic_error("phase-2 round count does not match phase-1 survivors");
  }
  std::vector<BobAction> plan2 = plan_bob_actions(r2, params.phase2_ctrl_count(), rng);
  std::vector<StateVector> states2;
  states2.reserve(r2);
  std::vector<RoundRecord> rec2(r2);
  for (int i = 0; i < r2; ++i) {
    StateVector s = std::move(sifted.survivor_states[i]);
    if (attack2) {
      s = attach_probe(attack, s);
      s = attack_forward(attack, s, 2, rng);
    }
    BobActResult acted = bob_act(s, 2, plan2[i], rng);
    StateVector back = attack2 ? attack_return(attack, acted.state, 2, rng)
                               : std::move(acted.state);
    if (attack2) {
      note_probe_deviation(back);
    }
    rec2[i] = RoundRecord{i, 2, plan2[i], acted.bit, false, std::nullopt, std::nullopt, false};
    states2.push_back(std::move(back));
  }

  // Step 7: Bell check on every CTRL position, double-Z check on nu SIFTs.
  bool phase2_failed = false;
  std::vector<int> sift_positions2;
  for (int i = 0; i < r2; ++i) {
    if (plan2[i] == BobAction::ctrl) {
      CheckResult check = alice_check_ctrl_phase2(states2[i], {2, 3}, rng);
      rec2[i].checked = true;
      rec2[i].check_passed = check.passed;
      rec2[i].alice_outcome = check.outcome;
      phase2_failed |= !check.passed;
    } else {
      sift_positions2.push_back(i);
    }
  }
  for (int i : sample_positions(sift_positions2,
                                static_cast<std::size_t>(params.phase2_check_count()), rng)) {
    CheckResult check = alice_check_sift_phase2(states2[i], {2, 3}, *rec2[i].bob_bit, rng);
    rec2[i].checked = true;
    rec2[i].check_passed = check.passed;
    rec2[i].alice_outcome = check.outcome;
    phase2_failed |= !check.passed;
  }
  result.records = std::move(rec1);
  result.records.insert(result.records.end(), rec2.begin(), rec2.end());
  if (phase2_failed) {
    result.detected = true;
    result.detection_phase = 2;
    return result;
  }

  // Step 8: remaining SIFT positions become M_B2/M_A2.
  KeyMaterial key;
  key.m_a1 = std::move(sifted.m_a1);
  key.m_b1 = std::move(sifted.m_b1);
  const std::size_t phase1_records = static_cast<std::size_t>(r1);
  for (int i = 0; i < r2; ++i) {
    RoundRecord& rec = result.records[phase1_records + static_cast<std::size_t>(i)];
    if (rec.action != BobAction::sift || rec.checked) {
      continue;
    }
    rec.kept_for_key = true;
    key.m_b2.push_back(static_cast<std::uint8_t>(*rec.bob_bit));
    StateVector collapsed = states2[i];
    key.m_a2.push_back(static_cast<std::uint8_t>(measure_bit(states2[i], 3, rng, collapsed)));
  }
  if (key.m_b2.size() != static_cast<std::size_t>(params.n)) {
    throw std::logic_error("phase-2 survivor count does not match the parameters");
  }

  // Step 9: reconciliation and privacy amplification of the INFO bits.
  PostprocConfig config = postproc.value_or(PostprocConfig{});
  if (!postproc) {
    config.hash_seed = Rng::for_stream(params.seed, 0x9a5).raw();
  }
  const BitString info_alice = key.info_alice();
  const BitString info_bob = key.info_bob();
  result.key_material = std::move(key);
  try {
    ReconcileResult reconciled = reconcile(info_alice, info_bob, config);
    result.leaked_bits = reconciled.leaked;
    std::size_t m;
    if (config.output_length) {
      m = *config.output_length;
    } else {
      const std::size_t budget = info_alice.size();
      const std::size_t spent = reconciled.leaked + 32;
      m = budget > spent ? budget - spent : 0;
    }
    result.final_key = privacy_amplify(info_alice, reconciled.leaked, m, config.hash_seed);
  } catch (const ReconciliationError&) {
    result.reconciliation_failed = true;
  }
  return result;
}

std::string serialize_record(const RoundRecord& record) {
  std::ostringstream out;
  out << "phase=" << record.phase << " pos=" << record.position
      << " action=" << bob_action_name(record.action) << " bob_bit=" << opt_field(record.bob_bit)
      << " checked=" << static_cast<int>(record.checked)
      << " passed=" << opt_field(record.check_passed)
      << " alice=" << (record.alice_outcome ? *record.alice_outcome : std::string("-"))
      << " kept=" << static_cast<int>(record.kept_for_key);
  return out.str();
}

RoundRecord parse_record(const std::string& line) {
  std::istringstream in(line);
  std::string phase, pos, action, bob, checked, passed, alice, kept;
  if (!(in >> phase >> pos >> action >> bob >> checked >> passed >> alice >> kept)) {
    throw std::invalid_argument("malformed transcript line: " + line);
  }
  RoundRecord rec;
  rec.phase = std::stoi(field_value(phase, "phase"));
  rec.position = std::stoi(field_value(pos, "pos"));
  const std::string action_value = field_value(action, "action");
  if (action_value == "CTRL") {
    rec.action = BobAction::ctrl;
  } else if (action_value == "SIFT") {
    rec.action = BobAction::sift;
  } else {
    throw std::invalid_argument("unknown action in transcript: " + action_value);
  }
  const std::string bob_value = field_value(bob, "bob_bit");
  if (bob_value != "-") {
    rec.bob_bit = std::stoi(bob_value);
  }
  rec.checked = field_value(checked, "checked") == "1";
  const std::string passed_value = field_value(passed, "passed");
  if (passed_value != "-") {
    rec.check_passed = passed_value == "1";
  }
  const std::string alice_value = field_value(alice, "alice");
  if (alice_value != "-") {
    rec.alice_outcome = alice_value;
  }
  rec.kept_for_key = field_value(kept, "kept") == "1";
  return rec;
}

std::string serialize_transcript(const std::vector<RoundRecord>& records) {
  std::string out;
  for (const RoundRecord& rec : records) {
    out += serialize_record(rec);
    out += '\n';
  }
  return out;
}

std::vector<RoundRecord> parse_transcript(const std::string& text) {
  std::vector<RoundRecord> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      records.push_back(parse_record(line));
    }
  }
  return records;
}

}  // namespace sqkd
