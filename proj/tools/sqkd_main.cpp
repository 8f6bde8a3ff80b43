// Batch experiment driver: run sessions, sweep attacks against the
// Monte Carlo and closed-form detection rates, tabulate qubit efficiency,
// and analyze entangle-measure attack configurations.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqkd/adversary.hpp"
#include "sqkd/postproc.hpp"
#include "sqkd/protocol.hpp"
#include "sqkd/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDetected = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + out_path);
  }
  out << text;
}

sqkd::AttackStrategy build_strategy(const std::string& attack, const std::string& scope,
                                    const std::string& em_file, bool pin_fake_to_zero) {
  sqkd::AttackStrategy strategy;
  strategy.kind = sqkd::attack_kind_from_name(attack);
  strategy.phase_scope = sqkd::phase_scope_from_name(scope);
  strategy.pin_fake_to_zero = pin_fake_to_zero;
  if (strategy.kind == sqkd::AttackKind::entangle_measure) {
    if (em_file.empty()) {
      throw std::invalid_argument("--em-file is required for the entangle-measure attack");
    }
    strategy.em_config = sqkd::load_entangle_measure_config(em_file);
  }
  return strategy;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiquantum key distribution simulator on GHZ-like entangled states"};
  app.require_subcommand(1);

  const std::vector<std::string> attack_names{"none", "measure-resend", "intercept-resend",
                                              "double-cnot", "entangle-measure"};

  // run
  auto* run = app.add_subcommand("run", "Execute one full key distribution session");
  int run_n = 16, run_delta = 4, run_nu = 4;
  std::uint64_t run_seed = 0;
  std::string run_attack = "none", run_scope = "both";
  std::string run_format = "json", run_out, run_em_file, run_transcript_out;
  bool run_pin_fake = false;
  run->add_option("--n", run_n, "Key-source rounds");
  run->add_option("--delta", run_delta, "Phase-1 SIFT-check budget");
  run->add_option("--nu", run_nu, "Phase-2 budget");
  run->add_option("--attack", run_attack)->check(CLI::IsMember(attack_names));
  run->add_option("--phase", run_scope, "Attack phase scope: 1, 2 or both")
      ->check(CLI::IsMember({"1", "2", "both"}));
  run->add_option("--seed", run_seed, "Master seed")->envname("SQKD_SEED");
  run->add_option("--format", run_format)->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", run_out, "Output path (default stdout)");
  run->add_option("--em-file", run_em_file, "Entangle-measure attack config");
  run->add_option("--transcript-out", run_transcript_out,
                  "Write the per-round transcript to this path");
  run->add_flag("--pin-fake-zero", run_pin_fake, "Pin intercept-resend fakes to |0>");

  // detect
  auto* detect = app.add_subcommand(
      "detect", "Monte Carlo per-position detection rates vs the closed forms");
  int det_n = 100, det_delta = 50, det_nu = 50;
  std::uint64_t det_trials = 40000, det_seed = 0;
  std::string det_attack, det_phase, det_format = "csv", det_out, det_em_file;
  bool det_serial = false;
  detect->add_option("--n", det_n);
  detect->add_option("--delta", det_delta);
  detect->add_option("--nu", det_nu);
  detect->add_option("--attack", det_attack, "Single attack (default: all closed-form kinds)")
      ->check(CLI::IsMember(attack_names));
  detect->add_option("--phase", det_phase, "Restrict to phase 1 or 2 (default: both)")
      ->check(CLI::IsMember({"1", "2"}));
  detect->add_option("--trials", det_trials)->check(CLI::PositiveNumber);
  detect->add_option("--seed", det_seed)->envname("SQKD_SEED");
  detect->add_option("--format", det_format)->check(CLI::IsMember({"json", "csv"}));
  detect->add_option("--out", det_out);
  detect->add_option("--em-file", det_em_file);
  detect->add_flag("--serial", det_serial, "Use the serial reference estimator");

  // efficiency
  auto* efficiency = app.add_subcommand("efficiency", "Qubit-efficiency accounting table");
  std::vector<long long> eff_n{100};
  long long eff_delta = 10, eff_nu = 10;
  std::string eff_format = "csv", eff_out;
  efficiency->add_option("--n", eff_n, "One row per n value")->expected(-1);
  efficiency->add_option("--delta", eff_delta);
  efficiency->add_option("--nu", eff_nu);
  efficiency->add_option("--format", eff_format)->check(CLI::IsMember({"json", "csv"}));
  efficiency->add_option("--out", eff_out);

  // analyze-em
  auto* analyze = app.add_subcommand(
      "analyze-em", "Exact leakage analysis of an entangle-measure attack config");
  std::string em_file, em_phase = "1", em_format = "json", em_out;
  double em_tol = 1e-9;
  analyze->add_option("--em-file", em_file)->required();
  analyze->add_option("--phase", em_phase)->check(CLI::IsMember({"1", "2"}));
  analyze->add_option("--tol", em_tol, "Check-error tolerance for the certificate");
  analyze->add_option("--format", em_format)->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--out", em_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) {
      sqkd::ProtocolParams params{run_n, run_delta, run_nu, run_seed};
      params.validate();
      const sqkd::AttackStrategy strategy =
          build_strategy(run_attack, run_scope, run_em_file, run_pin_fake);
      const sqkd::SessionResult session = sqkd::run_session(params, strategy);
      const sqkd::OutputFormat format = sqkd::output_format_from_name(run_format);
      write_output(sqkd::run_report(sqkd::summarize_session(session, strategy), format),
                   run_out);
      if (!run_transcript_out.empty()) {
        write_output(sqkd::transcript_table(sqkd::serialize_transcript(session.records), format),
                     run_transcript_out);
      }
      return session.detected || session.reconciliation_failed ? kExitDetected : kExitOk;
    }

    if (*detect) {
      sqkd::ProtocolParams params{det_n, det_delta, det_nu, det_seed};
      params.validate();
      std::vector<sqkd::AttackStrategy> strategies;
      if (det_attack.empty()) {
        for (const char* name : {"none", "measure-resend", "intercept-resend", "double-cnot"}) {
          strategies.push_back(build_strategy(name, "both", "", false));
        }
      } else {
        strategies.push_back(build_strategy(det_attack, "both", det_em_file, false));
      }
      std::vector<int> phases;
      if (det_phase.empty()) {
        phases = {1, 2};
      } else {
        phases = {std::stoi(det_phase)};
      }
      const auto policy = det_serial ? sqkd::ExecPolicy::serial : sqkd::ExecPolicy::parallel;
      const auto rows =
          sqkd::build_detect_rows(params, strategies, phases, det_trials, det_seed, policy);
      write_output(sqkd::detect_table(rows, sqkd::output_format_from_name(det_format)), det_out);
      return kExitOk;
    }

    if (*efficiency) {
      const auto rows = sqkd::build_efficiency_rows(eff_n, eff_delta, eff_nu);
      write_output(sqkd::efficiency_table(rows, sqkd::output_format_from_name(eff_format)),
                   eff_out);
      return kExitOk;
    }

    if (*analyze) {
      const sqkd::EntangleMeasureConfig config = sqkd::load_entangle_measure_config(em_file);
      const int phase = std::stoi(em_phase);
      sqkd::EmAnalysisReport report;
      report.probe_dim = static_cast<int>(config.probe_dim());
      report.phase = phase;
      report.leakage = sqkd::analyze_entangle_measure(config, phase);
      report.certificate = sqkd::probe_independence_certificate(config, phase, em_tol);
      write_output(sqkd::em_report(report, sqkd::output_format_from_name(em_format)), em_out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
