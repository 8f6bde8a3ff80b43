#include <doctest.h>

#include <json.hpp>

#include "sqkd/report.hpp"
#include "test_util.hpp"

using namespace sqkd;

TEST_CASE("doubles render locale-free with a dot") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.4375) == "0.4375");
  CHECK(format_double(1.0 / 3.0).find('.') != std::string::npos);
}

TEST_CASE("detect tables carry the documented schema") {
  std::vector<DetectRow> rows;
  rows.push_back(DetectRow{"measure-resend", 1, 0.25, 0.2501, 0.0021, 40000});
  rows.push_back(DetectRow{"entangle-measure", 2, std::nullopt, 0.125, 0.002, 10000});

  const std::string csv = detect_table(rows, OutputFormat::csv);
  CHECK(csv.rfind("attack,phase,p_analytic,p_hat,std_err,trials\n", 0) == 0);
  CHECK(csv.find("measure-resend,1,0.25,0.2501,0.0021,40000\n") != std::string::npos);
  CHECK(csv.find("entangle-measure,2,n/a,0.125,0.002,10000\n") != std::string::npos);
  CHECK(csv.back() == '\n');
  CHECK(csv.find('\r') == std::string::npos);

  const auto parsed = nlohmann::json::parse(detect_table(rows, OutputFormat::json));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["attack"] == "measure-resend");
  CHECK(parsed[0]["p_analytic"] == 0.25);
  CHECK(parsed[1]["p_analytic"].is_null());
  CHECK(parsed[1]["trials"] == 10000);
}

TEST_CASE("detect rows are reproducible and row-order independent") {
  const ProtocolParams params{16, 4, 4, 0};
  const std::vector<AttackStrategy> both{testutil::strategy_of(AttackKind::none),
                                         testutil::strategy_of(AttackKind::measure_resend)};
  const std::vector<AttackStrategy> single{testutil::strategy_of(AttackKind::measure_resend)};
  const auto a = build_detect_rows(params, both, {1}, 2000, 5, ExecPolicy::parallel);
  const auto b = build_detect_rows(params, both, {1}, 2000, 5, ExecPolicy::serial);
  const auto c = build_detect_rows(params, single, {1}, 2000, 5, ExecPolicy::parallel);
  REQUIRE(a.size() == 2);
  CHECK(a[0].p_hat == 0.0);
  CHECK(a[1].p_hat == b[1].p_hat);
  // The measure-resend row gets its own substream, so dropping the none
  // row does not change it.
  CHECK(a[1].p_hat == c[0].p_hat);
  CHECK(detect_table(a, OutputFormat::csv) == detect_table(b, OutputFormat::csv));
}

TEST_CASE("efficiency tables") {
  const auto rows = build_efficiency_rows({100, 1}, 10, 10);
  const std::string csv = efficiency_table(rows, OutputFormat::csv);
  CHECK(csv.rfind("n,delta,nu,lambda_b,gamma_q,gamma_c,eta\n", 0) == 0);
  CHECK(csv.find("100,10,10,320,1790,0,") != std::string::npos);
  const auto parsed = nlohmann::json::parse(efficiency_table(rows, OutputFormat::json));
  CHECK(parsed[0]["gamma_q"] == 1790);
  CHECK(parsed[1]["lambda_b"] == 23);
}

TEST_CASE("run summaries serialize both ways") {
  const SessionResult session = run_session(ProtocolParams{4, 2, 2, 12}, AttackStrategy{});
  const RunSummary summary = summarize_session(session, AttackStrategy{});
  CHECK(summary.info_bits == 16);
  CHECK(summary.qubits_consumed == 118);

  const std::string csv = run_report(summary, OutputFormat::csv);
  CHECK(csv.rfind("n,delta,nu,attack,phase_scope,seed,detected,detection_phase,", 0) == 0);
  CHECK(csv.find("4,2,2,none,both,12,0,,16,") != std::string::npos);

  const auto parsed = nlohmann::json::parse(run_report(summary, OutputFormat::json));
  CHECK(parsed["detected"] == false);
  CHECK(parsed["detection_phase"].is_null());
  CHECK(parsed["info_bits"] == 16);
  CHECK(parsed["final_key_hex"].is_string());
}

TEST_CASE("transcript tables consume the line format") {
  const SessionResult session = run_session(ProtocolParams{1, 1, 1, 3}, AttackStrategy{});
  const std::string lines = serialize_transcript(session.records);
  const std::string csv = transcript_table(lines, OutputFormat::csv);
  CHECK(csv.rfind("phase,position,action,bob_bit,checked,passed,alice_outcome,kept_for_key\n",
                  0) == 0);
  // One data line per record plus the header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(session.records.size()));
  const auto parsed = nlohmann::json::parse(transcript_table(lines, OutputFormat::json));
  CHECK(parsed.size() == session.records.size());
  CHECK(parsed[0]["phase"] == 1);
}

TEST_CASE("analyzer reports serialize both ways") {
  EmAnalysisReport report;
  report.probe_dim = 2;
  report.phase = 1;
  report.leakage = LeakageReport{0.5, 0.0, 1.0};
  report.certificate = true;
  const std::string csv = em_report(report, OutputFormat::csv);
  CHECK(csv ==
        "probe_dim,phase,ctrl_error,sift_error,probe_distinguishability,certificate\n"
        "2,1,0.5,0,1,1\n");
  const auto parsed = nlohmann::json::parse(em_report(report, OutputFormat::json));
  CHECK(parsed["ctrl_error"] == 0.5);
  CHECK(parsed["certificate"] == true);
}

TEST_CASE("format names parse strictly") {
  CHECK(output_format_from_name("json") == OutputFormat::json);
  CHECK(output_format_from_name("csv") == OutputFormat::csv);
  CHECK_THROWS_AS(output_format_from_name("xml"), std::invalid_argument);
}
