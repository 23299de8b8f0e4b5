#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kepart/harness.hpp"
#include "kepart/partition.hpp"

namespace kepart::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit status: 0 success, 1 a verification or oracle check failed, 2 usage
/// or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses a single-system JSON document ("masses", "positions",
/// "velocities"; raw coordinates, one array per particle) and returns the
/// flat JSON report of every term. Throws std::runtime_error on malformed
/// input and std::invalid_argument on a zero hyperradius.
std::string partition_report_json(const std::string& input_json,
                                  const ToleranceConfig& tol = {});

/// Config echo embedded in simulate output.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

/// Runs a simulate config and returns the complete CSV text.
std::string simulate_csv(const ExperimentConfig& cfg);

struct Discrepancy {
  std::string name;  // e.g. "T_ext fast vs oracle"
  double max_rel = 0.0;
  std::uint64_t compared = 0;
};

struct OracleCheckResult {
  std::vector<Discrepancy> pairs;
  std::uint64_t systems = 0;
  bool pass = false;
};

/// |a − b| / max(1, |a|, |b|).
double rel_diff(double a, double b);

/// Cross-checks the fast paths against the brute-force oracles on
/// `samples` random systems per mass mode. Requires 1 ≤ d ≤ 5 and
/// 2 ≤ N ≤ 8 (std::invalid_argument otherwise). Passes iff every
/// discrepancy is at most `tol`.
OracleCheckResult oracle_check(int d, int N, std::uint64_t samples, std::uint64_t seed,
                               double tol = 1e-8);

}  // namespace kepart::cli
