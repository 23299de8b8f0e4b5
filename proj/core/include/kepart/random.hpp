#pragma once

#include <array>
#include <cstdint>

namespace kepart {

/// Deterministic random stream keyed by (seed, stream index).
///
/// Generator: xoshiro256** (Blackman & Vigna, 2018). The 256-bit state is
/// filled by splitmix64 from a key that mixes seed and stream index, so
/// distinct stream indices give statistically independent sequences and
/// identical keys reproduce bit-identical draws on every platform.
///
/// Normal deviates use the Marsaglia polar method, which needs only sqrt
/// and log. Not thread-safe; give every worker its own stream.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finaliser; exposed for deriving sub-seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace kepart
