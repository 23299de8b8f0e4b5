#pragma once

#include <cstdint>

namespace kepart {

/// Streaming count, mean, sum of squared deviations, extrema and sign counts.
/// Welford updates in long double; merge() uses the pairwise (Chan et al.)
/// combination, so merging in a fixed order is reproducible bit for bit.
class StatAccumulator {
 public:
  void add(double x);
  void merge(const StatAccumulator& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return static_cast<double>(mean_); }
  /// Σ (x − mean)².
  double m2() const { return static_cast<double>(m2_); }
  double min() const { return min_; }
  double max() const { return max_; }
  std::uint64_t negative() const { return negative_; }
  std::uint64_t positive() const { return positive_; }

  /// M2/count; 0 when empty.
  double variance_biased() const;
  /// M2/(count − 1); 0 when count < 2.
  double variance_unbiased() const;
  /// (variance_biased/count)^{1/2}.
  double standard_error() const;

 private:
  std::uint64_t count_ = 0;
  long double mean_ = 0.0L;
  long double m2_ = 0.0L;
  double min_ = 0.0;
  double max_ = 0.0;
  std::uint64_t negative_ = 0;
  std::uint64_t positive_ = 0;
};

}  // namespace kepart
