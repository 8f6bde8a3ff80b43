#include "sqkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

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

const Unitary& swap_gate() {
  static const Unitary gate = [] {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0b00, 0b00) = 1.0;
    m(0b10, 0b01) = 1.0;
    m(0b01, 0b10) = 1.0;
    m(0b11, 0b11) = 1.0;
    return Unitary(std::move(m));
  }();
  return gate;
}

std::vector<int> trailing_qubits(const StateVector& state, int count) {
  std::vector<int> qubits;
  for (int q = state.num_qubits() - count + 1; q <= state.num_qubits(); ++q) {
    qubits.push_back(q);
  }
  return qubits;
}

void require_em_config(const AttackStrategy& strategy) {
  if (strategy.kind == AttackKind::entangle_measure && !strategy.em_config) {
    throw std::invalid_argument("entangle-measure strategy needs an em_config");
  }
}

void check_phase(int phase) {
  if (phase != 1 && phase != 2) {
    throw std::invalid_argument("phase must be 1 or 2");
  }
}

// One simulated attacked position, through the marginal the closed forms
// use: Bob's action is a fair coin, CTRL is always checked, SIFT is checked
// with the per-position selection probability of the given phase.
bool trial_detects(const ProtocolParams& params, const AttackStrategy& strategy, int phase,
                   Rng& rng) {
  const StateVector base = phase == 1 ? ghz_like(GhzLikeLabel{0, 0, 1})
                                      : bell(BellLabel::phi_plus);
  const int flying = 1;
  StateVector s = attach_probe(strategy, base);
  s = attack_forward(strategy, s, flying, rng);
  const BobAction action = rng.bit() ? BobAction::sift : BobAction::ctrl;
  BobActResult acted = bob_act(s, flying, action, rng);
  StateVector back = attack_return(strategy, acted.state, flying, rng);
  if (action == BobAction::ctrl) {
    if (phase == 1) {
      return !alice_check_ctrl_phase1(back, rng).passed;
    }
    return !alice_check_ctrl_phase2(back, {1, 2}, rng).passed;
  }
  const double p_checked =
      phase == 1 ? static_cast<double>(params.delta) / (params.n + params.delta + params.nu)
                 : static_cast<double>(params.nu) / (params.n + params.nu);
  if (!rng.bernoulli(p_checked)) {
    return false;
  }
  if (phase == 1) {
    return !alice_check_sift_phase1(back, *acted.bit, rng).passed;
  }
  return !alice_check_sift_phase2(back, {1, 2}, *acted.bit, rng).passed;
}

double leakage_tolerance(double error_tol) {
  // Only the zero-error direction is asserted; the sqrt term is a
  // continuity allowance for near-zero declared tolerances.
  return 1e-8 + 2.0 * std::sqrt(error_tol);
}

}  // namespace

std::string attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::none:
      return "none";
    case AttackKind::measure_resend:
      return "measure-resend";
    case AttackKind::intercept_resend:
      return "intercept-resend";
    case AttackKind::double_cnot:
      return "double-cnot";
    case AttackKind::entangle_measure:
      return "entangle-measure";
  }
  throw std::invalid_argument("unknown attack kind");
}

AttackKind attack_kind_from_name(const std::string& name) {
  if (name == "none") return AttackKind::none;
  if (name == "measure-resend") return AttackKind::measure_resend;
  if (name == "intercept-resend") return AttackKind::intercept_resend;
  if (name == "double-cnot") return AttackKind::double_cnot;
  if (name == "entangle-measure") return AttackKind::entangle_measure;
  throw std::invalid_argument("unknown attack kind: " + name);
}

std::string phase_scope_name(PhaseScope scope) {
  switch (scope) {
    case PhaseScope::phase1:
      return "1";
    case PhaseScope::phase2:
      return "2";
    case PhaseScope::both:
      return "both";
  }
  throw std::invalid_argument("unknown phase scope");
}

PhaseScope phase_scope_from_name(const std::string& name) {
  if (name == "1") return PhaseScope::phase1;
  if (name == "2") return PhaseScope::phase2;
  if (name == "both") return PhaseScope::both;
  throw std::invalid_argument("unknown phase scope: " + name);
}

EntangleMeasureConfig::EntangleMeasureConfig(Unitary forward, Unitary ret, StateVector probe)
    : forward_unitary(std::move(forward)),
      return_unitary(std::move(ret)),
      initial_probe(std::move(probe)) {
  if (initial_probe.num_qubits() > 3) {
    throw std::invalid_argument("probe dimension above 8 is not supported");
  }
  const Eigen::Index expected = 2 * initial_probe.dim();
  if (forward_unitary.dim() != expected || return_unitary.dim() != expected) {
    throw std::invalid_argument("attack unitaries must act on (flying qubit x probe)");
  }
}

int AttackStrategy::probe_qubit_count() const {
  switch (kind) {
    case AttackKind::double_cnot:
      return 1;
    case AttackKind::entangle_measure:
      require_em_config(*this);
      return em_config->probe_qubit_count();
    default:
      return 0;
  }
}

bool AttackStrategy::applies_to_phase(int phase) const {
  check_phase(phase);
  if (kind == AttackKind::none) {
    return false;
  }
  if (phase_scope == PhaseScope::both) {
    return true;
  }
  return (phase == 1) == (phase_scope == PhaseScope::phase1);
}

std::optional<DensityMatrix> AttackStrategy::initial_probe_density() const {
  switch (kind) {
    case AttackKind::double_cnot:
      return DensityMatrix::pure(StateVector::basis_state(1, 0));
    case AttackKind::entangle_measure:
      require_em_config(*this);
      return DensityMatrix::pure(em_config->initial_probe);
    default:
      return std::nullopt;
  }
}

StateVector attach_probe(const AttackStrategy& strategy, const StateVector& base) {
  switch (strategy.kind) {
    case AttackKind::double_cnot:
      return tensor(base, StateVector::basis_state(1, 0));
    case AttackKind::entangle_measure:
      require_em_config(strategy);
      return tensor(base, strategy.em_config->initial_probe);
    default:
      return base;
  }
}

StateVector attack_forward(const AttackStrategy& strategy, const StateVector& state,
                           int flying_qubit, Rng& rng) {
  switch (strategy.kind) {
    case AttackKind::none:
      return state;
    case AttackKind::measure_resend:
      return measure_subset(state, {flying_qubit}, shared_z_basis(), rng).state;
    case AttackKind::intercept_resend: {
      // A fresh fake in the Z basis takes the flying slot; the genuine
      // particle moves to the end of the register, in Eve's hands.
      const int fake = strategy.pin_fake_to_zero ? 0 : rng.bit();
      StateVector grown = tensor(state, StateVector::basis_state(1, static_cast<std::uint64_t>(fake)));
      return apply_unitary(grown, swap_gate(), {flying_qubit, grown.num_qubits()});
    }
    case AttackKind::double_cnot:
      return apply_unitary(state, cnot(), {flying_qubit, state.num_qubits()});
    case AttackKind::entangle_measure: {
      require_em_config(strategy);
      std::vector<int> targets{flying_qubit};
      for (int q : trailing_qubits(state, strategy.em_config->probe_qubit_count())) {
        targets.push_back(q);
      }
      return apply_unitary(state, strategy.em_config->forward_unitary, targets);
    }
  }
  throw std::invalid_argument("unknown attack kind");
}

StateVector attack_return(const AttackStrategy& strategy, const StateVector& state,
                          int flying_qubit, Rng& rng) {
  (void)rng;
  switch (strategy.kind) {
    case AttackKind::none:
    case AttackKind::measure_resend:
    case AttackKind::intercept_resend:
      return state;
    case AttackKind::double_cnot:
      return apply_unitary(state, cnot(), {flying_qubit, state.num_qubits()});
    case AttackKind::entangle_measure: {
      require_em_config(strategy);
      std::vector<int> targets{flying_qubit};
      for (int q : trailing_qubits(state, strategy.em_config->probe_qubit_count())) {
        targets.push_back(q);
      }
      return apply_unitary(state, strategy.em_config->return_unitary, targets);
    }
  }
  throw std::invalid_argument("unknown attack kind");
}

double analytic_detection(AttackKind kind, int phase, const ProtocolParams& params) {
  check_phase(phase);
  params.validate();
  switch (kind) {
    case AttackKind::none:
    case AttackKind::double_cnot:
      return 0.0;
    case AttackKind::measure_resend:
      return 0.25;
    case AttackKind::intercept_resend:
      if (phase == 1) {
        return 3.0 / 8.0 +
               static_cast<double>(params.delta) / (4.0 * (params.n + params.delta + params.nu));
      }
      return 3.0 / 8.0 + static_cast<double>(params.nu) / (4.0 * (params.n + params.nu));
    case AttackKind::entangle_measure:
      throw std::invalid_argument("entangle-measure has no closed-form detection probability");
  }
  throw std::invalid_argument("unknown attack kind");
}

DetectionEstimate estimate_detection(const ProtocolParams& params,
                                     const AttackStrategy& strategy, int phase,
                                     std::uint64_t trials, std::uint64_t seed,
                                     ExecPolicy policy) {
  check_phase(phase);
  params.validate();
  require_em_config(strategy);
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  std::uint64_t failures = 0;
  if (policy == ExecPolicy::parallel) {
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : failures) schedule(static)
#endif
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
      Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(t));
      failures += trial_detects(params, strategy, phase, rng) ? 1u : 0u;
    }
  } else {
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng = Rng::for_stream(seed, t);
      failures += trial_detects(params, strategy, phase, rng) ? 1u : 0u;
    }
  }
  DetectionEstimate est;
  est.failures = failures;
  est.trials = trials;
  est.p_hat = static_cast<double>(failures) / static_cast<double>(trials);
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
  return est;
}

LeakageReport analyze_entangle_measure(const EntangleMeasureConfig& config, int phase) {
  check_phase(phase);
  const StateVector base = phase == 1 ? ghz_like(GhzLikeLabel{0, 0, 1})
                                      : bell(BellLabel::phi_plus);
  const StateVector start = tensor(base, config.initial_probe);
  std::vector<int> attack_targets{1};
  std::vector<int> probe_targets;
  for (int q = base.num_qubits() + 1; q <= start.num_qubits(); ++q) {
    attack_targets.push_back(q);
    probe_targets.push_back(q);
  }

  std::vector<DensityMatrix> probes;  // Eve's conditional probe per branch
  LeakageReport report;

  const StateVector forwarded = apply_unitary(start, config.forward_unitary, attack_targets);

  // CTRL branch: Bob reflects, Eve's return map, Alice's joint check.
  {
    const StateVector returned =
        apply_unitary(forwarded, config.return_unitary, attack_targets);
    const MeasurementBasis& check_basis = phase == 1 ? shared_ghz_basis() : shared_bell_basis();
    const std::vector<int> check_targets = phase == 1 ? std::vector<int>{1, 2, 3}
                                                      : std::vector<int>{1, 2};
    const std::size_t pass_outcome = phase == 1 ? kOutcomeG001 : kOutcomePhiPlus;
    const std::vector<double> dist = born_distribution(returned, check_targets, check_basis);
    report.ctrl_error = std::max(0.0, 1.0 - dist[pass_outcome]);
    for (std::size_t o = 0; o < dist.size(); ++o) {
      if (dist[o] <= kExactTol) continue;
      auto [p, collapsed] = project_onto(returned, check_targets, check_basis, o);
      probes.push_back(reduced_density(collapsed, probe_targets));
    }
  }

  // SIFT branches: Bob's Z outcome, Eve's return map, Alice's checks.
  {
    const std::vector<double> bob_dist = born_distribution(forwarded, {1}, shared_z_basis());
    for (std::size_t b = 0; b < 2; ++b) {
      if (bob_dist[b] <= kExactTol) continue;
      auto [pb, after_bob] = project_onto(forwarded, {1}, shared_z_basis(), b);
      const StateVector returned =
          apply_unitary(after_bob, config.return_unitary, attack_targets);
      double pass_prob = 0.0;
      const std::vector<double> alice_dist = born_distribution(returned, {1}, shared_z_basis());
      for (std::size_t a = 0; a < 2; ++a) {
        if (alice_dist[a] <= kExactTol) continue;
        auto [pa, after_alice] = project_onto(returned, {1}, shared_z_basis(), a);
        if (phase == 1) {
          const std::vector<double> pair_dist =
              born_distribution(after_alice, {2, 3}, shared_bell_basis());
          const std::size_t expected = b == 0 ? kOutcomePsiPlus : kOutcomePhiPlus;
          for (std::size_t o = 0; o < pair_dist.size(); ++o) {
            if (pair_dist[o] <= kExactTol) continue;
            auto [po, end_state] = project_onto(after_alice, {2, 3}, shared_bell_basis(), o);
            if (a == b && o == expected) {
              pass_prob += pa * po;
            }
            probes.push_back(reduced_density(end_state, probe_targets));
          }
        } else {
          const std::vector<double> pair_dist =
              born_distribution(after_alice, {2}, shared_z_basis());
          for (std::size_t o = 0; o < pair_dist.size(); ++o) {
            if (pair_dist[o] <= kExactTol) continue;
            auto [po, end_state] = project_onto(after_alice, {2}, shared_z_basis(), o);
            if (a == b && o == b) {
              pass_prob += pa * po;
            }
            probes.push_back(reduced_density(end_state, probe_targets));
          }
        }
      }
      report.sift_error += bob_dist[b] * std::max(0.0, 1.0 - pass_prob);
    }
  }

  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      report.probe_distinguishability =
          std::max(report.probe_distinguishability, trace_distance(probes[i], probes[j]));
    }
  }
  return report;
}

bool probe_independence_certificate(const EntangleMeasureConfig& config, int phase,
                                    double error_tol) {
  if (error_tol < 0.0) {
    throw std::invalid_argument("error tolerance must be >= 0");
  }
  const LeakageReport report = analyze_entangle_measure(config, phase);
  if (std::max(report.ctrl_error, report.sift_error) > error_tol) {
    return true;  // vacuous: the config is detectable at this tolerance
  }
  return report.probe_distinguishability <= leakage_tolerance(error_tol);
}

namespace {

std::vector<std::string> tokenize_config(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      tokens.push_back(tok);
    }
  }
  return tokens;
}

double parse_real(const std::string& token) {
  std::size_t used = 0;
  const double value = std::stod(token, &used);
  if (used != token.size()) {
    throw std::invalid_argument("malformed number in attack config: " + token);
  }
  return value;
}

}  // namespace

EntangleMeasureConfig parse_entangle_measure_config(std::istream& in) {
  const std::vector<std::string> tokens = tokenize_config(in);
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (pos >= tokens.size()) {
      throw std::invalid_argument(std::string("attack config ends early, expected ") + what);
    }
    return tokens[pos++];
  };
  auto expect_keyword = [&](const char* keyword) {
    const std::string& tok = next(keyword);
    if (tok != keyword) {
      throw std::invalid_argument("expected '" + std::string(keyword) + "' but found '" +
                                  tok + "'");
    }
  };

  expect_keyword("probe_dim");
  const int probe_dim = static_cast<int>(parse_real(next("probe dimension")));
  if (probe_dim < 2 || probe_dim > 8 || (probe_dim & (probe_dim - 1)) != 0) {
    throw std::invalid_argument("probe_dim must be 2, 4 or 8");
  }
  const Eigen::Index dim = 2 * probe_dim;

  auto read_matrix = [&](const char* name) {
    expect_keyword(name);
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double re = parse_real(next("matrix entry"));
        const double im = parse_real(next("matrix entry"));
        m(r, c) = Complex{re, im};
      }
    }
    return Unitary(std::move(m), 1e-8);
  };
  Unitary forward = read_matrix("forward");
  Unitary ret = read_matrix("return");

  expect_keyword("probe");
  Eigen::VectorXcd probe(probe_dim);
  for (Eigen::Index i = 0; i < probe_dim; ++i) {
    const double re = parse_real(next("probe amplitude"));
    const double im = parse_real(next("probe amplitude"));
    probe(i) = Complex{re, im};
  }
  if (pos != tokens.size()) {
    throw std::invalid_argument("trailing tokens in attack config");
  }
  const double norm = probe.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw std::invalid_argument("probe amplitudes are not normalized");
  }
  probe /= norm;
  const int probe_qubits = probe_dim == 2 ? 1 : probe_dim == 4 ? 2 : 3;
  return EntangleMeasureConfig(std::move(forward), std::move(ret),
                               StateVector(probe_qubits, std::move(probe)));
}

EntangleMeasureConfig load_entangle_measure_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open attack config file: " + path);
  }
  return parse_entangle_measure_config(in);
}

}  // namespace sqkd
