// Compares the serial reference detection estimator against the
// OpenMP-parallel one: identical failure counts, wall-clock speedup.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sqkd/adversary.hpp"
#include "sqkd/report.hpp"

namespace {

double run_timed(const sqkd::ProtocolParams& params, const sqkd::AttackStrategy& strategy,
                 int phase, std::uint64_t trials, std::uint64_t seed, sqkd::ExecPolicy policy,
                 sqkd::DetectionEstimate& out) {
  const auto start = std::chrono::steady_clock::now();
  out = sqkd::estimate_detection(params, strategy, phase, trials, seed, policy);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP benchmark of the detection estimator"};
  int n = 100, delta = 50, nu = 50, phase = 1;
  std::uint64_t trials = 200000, seed = 1;
  std::string attack = "intercept-resend";
  app.add_option("--n", n);
  app.add_option("--delta", delta);
  app.add_option("--nu", nu);
  app.add_option("--phase", phase)->check(CLI::Range(1, 2));
  app.add_option("--trials", trials)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  app.add_option("--attack", attack)
      ->check(CLI::IsMember({"none", "measure-resend", "intercept-resend", "double-cnot"}));
  CLI11_PARSE(app, argc, argv);

  const sqkd::ProtocolParams params{n, delta, nu, seed};
  sqkd::AttackStrategy strategy;
  strategy.kind = sqkd::attack_kind_from_name(attack);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif

  sqkd::DetectionEstimate serial, parallel;
  const double serial_ms =
      run_timed(params, strategy, phase, trials, seed, sqkd::ExecPolicy::serial, serial);
  const double parallel_ms =
      run_timed(params, strategy, phase, trials, seed, sqkd::ExecPolicy::parallel, parallel);

  std::cout << "attack=" << attack << " phase=" << phase << " trials=" << trials
            << " threads=" << threads << "\n";
  std::cout << "serial:   " << serial_ms << " ms  p_hat=" << sqkd::format_double(serial.p_hat)
            << "\n";
  std::cout << "parallel: " << parallel_ms << " ms  p_hat="
            << sqkd::format_double(parallel.p_hat) << "\n";
  std::cout << "speedup:  " << sqkd::format_double(serial_ms / parallel_ms) << "x\n";
  if (serial.failures != parallel.failures) {
    std::cout << "MISMATCH: serial counted " << serial.failures << " failures, parallel "
              << parallel.failures << "\n";
    return 1;
  }
  std::cout << "counts identical: " << serial.failures << " failures\n";
  return 0;
}
