#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kepart/ensemble.hpp"
#include "kepart/partition.hpp"
#include "kepart/stats.hpp"
#include "kepart/terms.hpp"

namespace kepart {

struct ExperimentConfig {
  int d = 2;
  int n_min = 3;
  int n_max = 3;
  std::uint64_t samples = 100000;
  MassMode mode = MassMode::Equal;
  std::uint64_t seed = 0;
  ToleranceConfig tolerances;
  /// Worker threads; 0 reads KEPART_THREADS and falls back to the hardware
  /// concurrency. Results do not depend on this value.
  unsigned threads = 0;
};

/// Throws std::invalid_argument for d < 1, N < 2, n_min > n_max or
/// fewer than two samples.
void validate(const ExperimentConfig& cfg);

struct TermReport {
  Term term = Term::T;
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance_biased = 0.0;
  double variance_unbiased = 0.0;
  double stderr_ = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> expected;
  std::optional<double> abs_diff;       // |mean − expected|
  std::optional<double> weighted_diff;  // 2ν·|mean − expected|
  std::optional<double> sigma_ratio;    // |mean − expected| / stderr
  double fraction_negative = 0.0;
  double fraction_positive = 0.0;
  std::uint64_t degenerate_excluded = 0;
};

/// Reports for one (d, N, mode).
struct PointReport {
  int d = 0;
  int N = 0;
  MassMode mode = MassMode::Equal;
  std::uint64_t seed = 0;
  double x_abscissa = 0.0;  // 1/2 − 1/(N − 1)
  std::vector<TermReport> terms;  // all_terms() order

  const TermReport& at(Term t) const;
};

/// |Δ| / sqrt(stderr² + floor²). The floor (1e-12) is the resolution of a
/// double-precision term of unit scale: quantities that vanish identically
/// only do so up to roundoff, with a standard error of the same size.
double sigma_ratio(double mean, double expected, double standard_error);

inline constexpr double kSigmaFloor = 1e-12;

/// Builds a report from an accumulator, comparing with `expected` if given.
TermReport make_term_report(Term t, const StatAccumulator& acc, std::optional<double> expected,
                            int nu, std::uint64_t degenerate_excluded);

/// Sub-seed for one (d, N, mode) point; sample i then uses
/// RandomStream(point_seed(...), i).
std::uint64_t point_seed(std::uint64_t seed, int d, int N, MassMode mode);

/// Samples and accumulates one (d, N, mode) point.
PointReport run_point(int d, int N, std::uint64_t samples, MassMode mode, std::uint64_t seed,
                      const ToleranceConfig& tol = {}, unsigned threads = 0);

/// One PointReport per N in [n_min, n_max].
std::vector<PointReport> run_experiment(const ExperimentConfig& cfg);

struct Check {
  int d = 0;
  int N = 0;
  MassMode mode = MassMode::Equal;
  std::string what;  // term name, or "fraction_negative(T_res)"
  double observed = 0.0;
  double expected = 0.0;
  double abs_diff = 0.0;
  double weighted_diff = 0.0;
  double sigma_ratio = 0.0;
  bool pass = false;
};

struct Verdict {
  std::vector<Check> checks;
  double max_abs_diff = 0.0;
  double mean_abs_diff = 0.0;
  double min_abs_diff = 0.0;
  double max_weighted_diff = 0.0;
  double mean_weighted_diff = 0.0;
  double max_sigma_ratio = 0.0;
  double mean_sigma_ratio = 0.0;
  double min_sigma_ratio = 0.0;
  bool all_pass = true;
};

/// Compares every term that has a closed-form mean for the point's mass
/// mode (see expectations_for) against its sample mean, and where T_res is
/// not identically zero (d ≥ 2, N ≥ 3) checks that its negative fraction is
/// within `sigma_threshold` binomial standard deviations of 1/2. Expected
/// values and ratios are recomputed here, not taken from the reports.
/// Aggregates cover the mean checks only.
Verdict verify_report(const std::vector<PointReport>& reports, double sigma_threshold = 4.0);

/// Thread count used when a config asks for 0.
unsigned default_thread_count();

}  // namespace kepart
