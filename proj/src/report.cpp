#include "sqkd/report.hpp"

#include <charconv>
#include <stdexcept>

#include <json.hpp>

namespace sqkd {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t detect_row_stream(AttackKind kind, int phase) {
  return static_cast<std::uint64_t>(kind) * 2 + static_cast<std::uint64_t>(phase - 1);
}

std::string csv_optional_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

ordered_json json_optional_int(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string json_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

OutputFormat output_format_from_name(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<DetectRow> build_detect_rows(const ProtocolParams& params,
                                         const std::vector<AttackStrategy>& strategies,
                                         const std::vector<int>& phases, std::uint64_t trials,
                                         std::uint64_t seed, ExecPolicy policy) {
  std::vector<DetectRow> rows;
  for (const AttackStrategy& strategy : strategies) {
    for (int phase : phases) {
      DetectRow row;
      row.attack = attack_kind_name(strategy.kind);
      row.phase = phase;
      if (strategy.kind != AttackKind::entangle_measure) {
        row.p_analytic = analytic_detection(strategy.kind, phase, params);
      }
      const std::uint64_t row_seed =
          Rng::derive_seed(seed, detect_row_stream(strategy.kind, phase));
      const DetectionEstimate est =
          estimate_detection(params, strategy, phase, trials, row_seed, policy);
      row.p_hat = est.p_hat;
      row.std_err = est.std_err;
      row.trials = est.trials;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string detect_table(const std::vector<DetectRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out = "attack,phase,p_analytic,p_hat,std_err,trials\n";
    for (const DetectRow& row : rows) {
      out += row.attack;
      out += ',' + std::to_string(row.phase);
      out += ',' + (row.p_analytic ? format_double(*row.p_analytic) : std::string("n/a"));
      out += ',' + format_double(row.p_hat);
      out += ',' + format_double(row.std_err);
      out += ',' + std::to_string(row.trials);
      out += '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const DetectRow& row : rows) {
    ordered_json j;
    j["attack"] = row.attack;
    j["phase"] = row.phase;
    j["p_analytic"] = row.p_analytic ? ordered_json(*row.p_analytic) : ordered_json(nullptr);
    j["p_hat"] = row.p_hat;
    j["std_err"] = row.std_err;
    j["trials"] = row.trials;
    arr.push_back(std::move(j));
  }
  return json_dump(arr);
}

std::vector<EfficiencyAccount> build_efficiency_rows(const std::vector<long long>& n_values,
                                                     long long delta, long long nu) {
  std::vector<EfficiencyAccount> rows;
  rows.reserve(n_values.size());
  for (long long n : n_values) {
    rows.push_back(qubit_efficiency(n, delta, nu));
  }
  return rows;
}

std::string efficiency_table(const std::vector<EfficiencyAccount>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out = "n,delta,nu,lambda_b,gamma_q,gamma_c,eta\n";
    for (const EfficiencyAccount& acc : rows) {
      out += std::to_string(acc.n);
      out += ',' + std::to_string(acc.delta);
      out += ',' + std::to_string(acc.nu);
      out += ',' + std::to_string(acc.lambda_b);
      out += ',' + std::to_string(acc.gamma_q);
      out += ',' + std::to_string(acc.gamma_c);
      out += ',' + format_double(acc.eta);
      out += '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const EfficiencyAccount& acc : rows) {
    ordered_json j;
    j["n"] = acc.n;
    j["delta"] = acc.delta;
    j["nu"] = acc.nu;
    j["lambda_b"] = acc.lambda_b;
    j["gamma_q"] = acc.gamma_q;
    j["gamma_c"] = acc.gamma_c;
    j["eta"] = acc.eta;
    arr.push_back(std::move(j));
  }
  return json_dump(arr);
}

RunSummary summarize_session(const SessionResult& session, const AttackStrategy& attack) {
  RunSummary s;
  s.params = session.params;
  s.attack = attack_kind_name(attack.kind);
  s.phase_scope = phase_scope_name(attack.phase_scope);
  s.detected = session.detected;
  s.detection_phase = session.detection_phase;
  if (session.key_material) {
    s.info_bits = session.key_material->info_alice().size();
  }
  s.leaked_bits = session.leaked_bits;
  if (session.final_key) {
    s.key_bits = session.final_key->size();
    s.final_key_hex = bits_to_hex(*session.final_key);
  }
  s.qubits_consumed = count_consumed_qubits(session).total;
  s.reconciliation_failed = session.reconciliation_failed;
  s.max_probe_deviation = session.max_probe_deviation;
  return s;
}

std::string run_report(const RunSummary& summary, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out =
        "n,delta,nu,attack,phase_scope,seed,detected,detection_phase,info_bits,"
        "leaked_bits,key_bits,final_key_hex,qubits_consumed,reconciliation_failed,"
        "max_probe_deviation\n";
    out += std::to_string(summary.params.n);
    out += ',' + std::to_string(summary.params.delta);
    out += ',' + std::to_string(summary.params.nu);
    out += ',' + summary.attack;
    out += ',' + summary.phase_scope;
    out += ',' + std::to_string(summary.params.seed);
    out += ',' + std::to_string(static_cast<int>(summary.detected));
    out += ',' + csv_optional_int(summary.detection_phase);
    out += ',' + std::to_string(summary.info_bits);
    out += ',' + std::to_string(summary.leaked_bits);
    out += ',' + std::to_string(summary.key_bits);
    out += ',' + summary.final_key_hex;
    out += ',' + std::to_string(summary.qubits_consumed);
    out += ',' + std::to_string(static_cast<int>(summary.reconciliation_failed));
    out += ',' + format_double(summary.max_probe_deviation);
    out += '\n';
    return out;
  }
  ordered_json j;
  j["n"] = summary.params.n;
  j["delta"] = summary.params.delta;
  j["nu"] = summary.params.nu;
  j["attack"] = summary.attack;
  j["phase_scope"] = summary.phase_scope;
  j["seed"] = summary.params.seed;
  j["detected"] = summary.detected;
  j["detection_phase"] = json_optional_int(summary.detection_phase);
  j["info_bits"] = summary.info_bits;
  j["leaked_bits"] = summary.leaked_bits;
  j["key_bits"] = summary.key_bits;
  j["final_key_hex"] = summary.final_key_hex;
  j["qubits_consumed"] = summary.qubits_consumed;
  j["reconciliation_failed"] = summary.reconciliation_failed;
  j["max_probe_deviation"] = summary.max_probe_deviation;
  return json_dump(j);
}

std::string transcript_table(const std::string& transcript_lines, OutputFormat format) {
  const std::vector<RoundRecord> records = parse_transcript(transcript_lines);
  if (format == OutputFormat::csv) {
    std::string out = "phase,position,action,bob_bit,checked,passed,alice_outcome,kept_for_key\n";
    for (const RoundRecord& rec : records) {
      out += std::to_string(rec.phase);
      out += ',' + std::to_string(rec.position);
      out += ',' + bob_action_name(rec.action);
      out += ',' + csv_optional_int(rec.bob_bit);
      out += ',' + std::to_string(static_cast<int>(rec.checked));
      out += ',';
      if (rec.check_passed) {
        out += std::to_string(static_cast<int>(*rec.check_passed));
      }
      out += ',' + (rec.alice_outcome ? *rec.alice_outcome : std::string());
      out += ',' + std::to_string(static_cast<int>(rec.kept_for_key));
      out += '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const RoundRecord& rec : records) {
    ordered_json j;
    j["phase"] = rec.phase;
    j["position"] = rec.position;
    j["action"] = bob_action_name(rec.action);
    j["bob_bit"] = json_optional_int(rec.bob_bit);
    j["checked"] = rec.checked;
    j["passed"] = rec.check_passed ? ordered_json(*rec.check_passed) : ordered_json(nullptr);
    j["alice_outcome"] =
        rec.alice_outcome ? ordered_json(*rec.alice_outcome) : ordered_json(nullptr);
    j["kept_for_key"] = rec.kept_for_key;
    arr.push_back(std::move(j));
  }
  return json_dump(arr);
}

std::string em_report(const EmAnalysisReport& report, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out =
        "probe_dim,phase,ctrl_error,sift_error,probe_distinguishability,certificate\n";
    out += std::to_string(report.probe_dim);
    out += ',' + std::to_string(report.phase);
    out += ',' + format_double(report.leakage.ctrl_error);
    out += ',' + format_double(report.leakage.sift_error);
    out += ',' + format_double(report.leakage.probe_distinguishability);
    out += ',' + std::to_string(static_cast<int>(report.certificate));
    out += '\n';
    return out;
  }
  ordered_json j;
  j["probe_dim"] = report.probe_dim;
  j["phase"] = report.phase;
  j["ctrl_error"] = report.leakage.ctrl_error;
  j["sift_error"] = report.leakage.sift_error;
  j["probe_distinguishability"] = report.leakage.probe_distinguishability;
  j["certificate"] = report.certificate;
  return json_dump(j);
}

}  // namespace sqkd
