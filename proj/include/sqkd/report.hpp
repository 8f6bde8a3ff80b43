#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqkd/adversary.hpp"
#include "sqkd/postproc.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

enum class OutputFormat { json, csv };

OutputFormat output_format_from_name(const std::string& name);

/// Shortest round-trip decimal rendering, '.' separator, locale-free.
std::string format_double(double value);

struct DetectRow {
  std::string attack;
  int phase = 1;
  std::optional<double> p_analytic;  // absent for entangle-measure
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

/// One Monte Carlo row per (attack, phase). Each row draws from its own
/// substream of `seed`, so a row's numbers do not depend on which other
/// rows were requested.
std::vector<DetectRow> build_detect_rows(const ProtocolParams& params,
                                         const std::vector<AttackStrategy>& strategies,
                                         const std::vector<int>& phases, std::uint64_t trials,
                                         std::uint64_t seed, ExecPolicy policy);

/// CSV schema: attack,phase,p_analytic,p_hat,std_err,trials
std::string detect_table(const std::vector<DetectRow>& rows, OutputFormat format);

std::vector<EfficiencyAccount> build_efficiency_rows(const std::vector<long long>& n_values,
                                                     long long delta, long long nu);

/// CSV schema: n,delta,nu,lambda_b,gamma_q,gamma_c,eta
std::string efficiency_table(const std::vector<EfficiencyAccount>& rows, OutputFormat format);

struct RunSummary {
  ProtocolParams params;
  std::string attack;
  std::string phase_scope;
  bool detected = false;
  std::optional<int> detection_phase;
  std::size_t info_bits = 0;
  std::size_t leaked_bits = 0;
  std::size_t key_bits = 0;
  std::string final_key_hex;
  std::size_t qubits_consumed = 0;
  bool reconciliation_failed = false;
  double max_probe_deviation = 0.0;
};

RunSummary summarize_session(const SessionResult& session, const AttackStrategy& attack);

/// CSV schema: n,delta,nu,attack,phase_scope,seed,detected,detection_phase,
/// info_bits,leaked_bits,key_bits,final_key_hex,qubits_consumed,
/// reconciliation_failed,max_probe_deviation
std::string run_report(const RunSummary& summary, OutputFormat format);

/// Converts the line-oriented transcript format into CSV or JSON.
/// CSV schema: phase,position,action,bob_bit,checked,passed,alice_outcome,
/// kept_for_key
std::string transcript_table(const std::string& transcript_lines, OutputFormat format);

struct EmAnalysisReport {
  int probe_dim = 2;
  int phase = 1;
  LeakageReport leakage;
  bool certificate = false;
};

/// CSV schema: probe_dim,phase,ctrl_error,sift_error,
/// probe_distinguishability,certificate
std::string em_report(const EmAnalysisReport& report, OutputFormat format);

}  // namespace sqkd
