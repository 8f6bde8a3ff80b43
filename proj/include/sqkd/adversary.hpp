#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sqkd/protocol.hpp"
#include "sqkd/rng.hpp"
#include "sqkd/statevector.hpp"

namespace sqkd {

enum class AttackKind {
  none,
  measure_resend,
  intercept_resend,
  double_cnot,
  entangle_measure,
};

enum class PhaseScope { phase1, phase2, both };

std::string attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);
std::string phase_scope_name(PhaseScope scope);
PhaseScope phase_scope_from_name(const std::string& name);

/// Eve's probe and the two unitaries of an entangle-measure attack: the
/// forward one acts on (flying qubit ⊗ probe) on the way to Bob, the
/// return one on the way back. The flying qubit is the high-order factor
/// of the unitaries' index space.
struct EntangleMeasureConfig {
  Unitary forward_unitary;
  Unitary return_unitary;
  StateVector initial_probe;

  EntangleMeasureConfig(Unitary forward, Unitary ret, StateVector probe);

  Eigen::Index probe_dim() const { return initial_probe.dim(); }
  int probe_qubit_count() const { return initial_probe.num_qubits(); }
};

/// An eavesdropper constrained to the in-flight qubit plus her own probe
/// register. Everything she does is identity on Alice's retained qubits.
struct AttackStrategy {
  AttackKind kind = AttackKind::none;
  PhaseScope phase_scope = PhaseScope::both;
  std::optional<EntangleMeasureConfig> em_config;
  /// Intercept-resend fakes default to uniformly random Z states; set to
  /// pin every fake to |0> instead.
  bool pin_fake_to_zero = false;

  int probe_qubit_count() const;
  bool applies_to_phase(int phase) const;
  /// Initial probe state as a density matrix; empty for probe-free kinds.
  std::optional<DensityMatrix> initial_probe_density() const;
};

/// Appends and initializes Eve's probe register (high-order state first,
/// probe last). No-op for strategies without a prepared probe.
StateVector attach_probe(const AttackStrategy& strategy, const StateVector& base);

/// Eve's action on the particle from Alice to Bob.
StateVector attack_forward(const AttackStrategy& strategy, const StateVector& state,
                           int flying_qubit, Rng& rng);

/// Eve's action on the particle from Bob back to Alice.
StateVector attack_return(const AttackStrategy& strategy, const StateVector& state,
                          int flying_qubit, Rng& rng);

/// Closed-form per-position detection probability: 1/4 for measure-resend
/// in either phase, 3/8 + delta/(4(n+delta+nu)) and 3/8 + nu/(4(n+nu)) for
/// intercept-resend in phases 1 and 2, zero for none and double-CNOT.
/// Entangle-measure has no closed form and is rejected.
double analytic_detection(AttackKind kind, int phase, const ProtocolParams& params);

enum class ExecPolicy { serial, parallel };

struct DetectionEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t failures = 0;
  std::uint64_t trials = 0;
};

/// Monte Carlo estimate of the per-position detection probability for one
/// phase: Bob's action is a fair coin, CTRL positions are always checked,
/// SIFT positions are checked with probability delta/(n+delta+nu) in
/// phase 1 and nu/(n+nu) in phase 2. Trial k draws from substream k of
/// `seed`, so serial and parallel runs produce identical counts.
DetectionEstimate estimate_detection(const ProtocolParams& params,
                                     const AttackStrategy& strategy, int phase,
                                     std::uint64_t trials, std::uint64_t seed,
                                     ExecPolicy policy = ExecPolicy::parallel);

struct LeakageReport {
  double ctrl_error = 0.0;
  double sift_error = 0.0;
  /// Max pairwise trace distance between Eve's conditional probe states
  /// across (Bob action, measurement outcome) branches.
  double probe_distinguishability = 0.0;
};

/// Exact (never sampled) propagation of one attacked round through both
/// Bob branches and Alice's checks.
LeakageReport analyze_entangle_measure(const EntangleMeasureConfig& config, int phase);

/// True iff check errors within error_tol imply probe distinguishability
/// within the analyzer floor (1e-8 at zero tolerance); vacuously true when
/// the config's errors exceed error_tol. A zero-error eavesdropper leaves
/// probe states independent of every branch, and this certifies it.
bool probe_independence_certificate(const EntangleMeasureConfig& config, int phase,
                                    double error_tol);

/// Text format: `probe_dim N`, then `forward`, `return` and `probe`
/// sections of whitespace-separated "re im" pairs (row-major matrices of
/// dimension 2N, then N probe amplitudes). '#' starts a comment. Matrices
/// are accepted as unitary within 1e-8.
EntangleMeasureConfig parse_entangle_measure_config(std::istream& in);
EntangleMeasureConfig load_entangle_measure_config(const std::string& path);

}  // namespace sqkd
