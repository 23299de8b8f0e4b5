#include "kepart/stats.hpp"

#include <algorithm>
#include <cmath>

namespace kepart {

void StatAccumulator::add(double x) {
  if (count_ == 0) {
    min_ = x;
    max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++count_;
  const long double delta = static_cast<long double>(x) - mean_;
  mean_ += delta / static_cast<long double>(count_);
  m2_ += delta * (static_cast<long double>(x) - mean_);
  if (x < 0.0) ++negative_;
  if (x > 0.0) ++positive_;
}

void StatAccumulator::merge(const StatAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const long double na = static_cast<long double>(count_);
  const long double nb = static_cast<long double>(other.count_);
  const long double n = na + nb;
  const long double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
  negative_ += other.negative_;
  positive_ += other.positive_;
}

double StatAccumulator::variance_biased() const {
  if (count_ == 0) return 0.0;
  return static_cast<double>(std::max(m2_, 0.0L) / static_cast<long double>(count_));
}

double StatAccumulator::variance_unbiased() const {
  if (count_ < 2) return 0.0;
  return static_cast<double>(std::max(m2_, 0.0L) / static_cast<long double>(count_ - 1));
}

double StatAccumulator::standard_error() const {
  if (count_ == 0) return 0.0;
  return std::sqrt(variance_biased() / static_cast<double>(count_));
}

}  // namespace kepart
