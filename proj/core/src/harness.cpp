#include "kepart/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "kepart/expectations.hpp"

namespace kepart {

namespace {

constexpr std::uint64_t kBlockSize = 2048;

struct BlockStats {
  std::array<StatAccumulator, kTermCount> acc;
  std::uint64_t degenerate = 0;
};

void accumulate_block(BlockStats& out, int d, int N, MassMode mode, std::uint64_t pseed,
                      std::uint64_t first, std::uint64_t last, const ToleranceConfig& tol) {
  for (std::uint64_t i = first; i < last; ++i) {
    RandomStream rng(pseed, i);
    const ParticleSystem sys = sample_system(d, N, mode, rng);
    const PartitionResult r = compute_partition(sys.total_mass(), sys.Z, sys.Zdot, tol);
    if (r.degenerate) ++out.degenerate;
    for (std::size_t k = 0; k < kTermCount; ++k) {
      const Term t = static_cast<Term>(k);
      if (r.degenerate && is_expansion_term(t)) continue;
      out.acc[k].add(term_value(r, t));
    }
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw std::invalid_argument("experiment: d must be positive");
  if (cfg.n_min < 2) throw std::invalid_argument("experiment: N must be at least 2");
  if (cfg.n_min > cfg.n_max) throw std::invalid_argument("experiment: n_min exceeds n_max");
  if (cfg.samples < 2) throw std::invalid_argument("experiment: need at least 2 samples");
}

const TermReport& PointReport::at(Term t) const {
  for (const auto& r : terms) {
    if (r.term == t) return r;
  }
  throw std::out_of_range("PointReport: no report for " + std::string(term_name(t)));
}

double sigma_ratio(double mean, double expected, double standard_error) {
  const double diff = std::abs(mean - expected);
  if (diff == 0.0) return 0.0;
  return diff / std::sqrt(standard_error * standard_error + kSigmaFloor * kSigmaFloor);
}

TermReport make_term_report(Term t, const StatAccumulator& acc, std::optional<double> expected,
                            int nu, std::uint64_t degenerate_excluded) {
  TermReport r;
  r.term = t;
  r.count = acc.count();
  r.mean = acc.mean();
  r.variance_biased = acc.variance_biased();
  r.variance_unbiased = acc.variance_unbiased();
  r.stderr_ = acc.standard_error();
  r.min = acc.min();
  r.max = acc.max();
  r.degenerate_excluded = degenerate_excluded;
  if (acc.count() > 0) {
    const double n = static_cast<double>(acc.count());
    r.fraction_negative = static_cast<double>(acc.negative()) / n;
    r.fraction_positive = static_cast<double>(acc.positive()) / n;
  }
  if (expected) {
    r.expected = *expected;
    r.abs_diff = std::abs(r.mean - *expected);
    r.weighted_diff = 2.0 * nu * *r.abs_diff;
    r.sigma_ratio = sigma_ratio(r.mean, *expected, r.stderr_);
  }
  return r;
}

std::uint64_t point_seed(std::uint64_t seed, int d, int N, MassMode mode) {
  const std::uint64_t key = (static_cast<std::uint64_t>(d) << 40) ^
                            (static_cast<std::uint64_t>(N) << 8) ^
                            (mode == MassMode::Random ? 1u : 0u);
  return mix64(seed ^ mix64(key));
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("KEPART_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PointReport run_point(int d, int N, std::uint64_t samples, MassMode mode, std::uint64_t seed,
                      const ToleranceConfig& tol, unsigned threads) {
  ExperimentConfig cfg;
  cfg.d = d;
  cfg.n_min = N;
  cfg.n_max = N;
  cfg.samples = samples;
  validate(cfg);

  const std::uint64_t pseed = point_seed(seed, d, N, mode);
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockStats> per_block(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::uint64_t first = b * kBlockSize;
        accumulate_block(per_block[b], d, N, mode, pseed, first,
                         std::min(samples, first + kBlockSize), tol);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const unsigned nthreads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads == 0 ? default_thread_count() : threads, blocks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed merge order keeps the result independent of scheduling.
  BlockStats total;
  for (const auto& b : per_block) {
    for (std::size_t k = 0; k < kTermCount; ++k) total.acc[k].merge(b.acc[k]);
    total.degenerate += b.degenerate;
  }

  const ExpectationSet exp = expectations_for(d, N, mode);
  PointReport rep;
  rep.d = d;
  rep.N = N;
  rep.mode = mode;
  rep.seed = seed;
  rep.x_abscissa = 0.5 - 1.0 / static_cast<double>(N - 1);
  for (std::size_t k = 0; k < kTermCount; ++k) {
    const Term t = static_cast<Term>(k);
    rep.terms.push_back(make_term_report(t, total.acc[k], exp.value(t), N - 1,
                                         is_expansion_term(t) ? total.degenerate : 0));
  }
  return rep;
}

std::vector<PointReport> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<PointReport> out;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    out.push_back(run_point(cfg.d, n, cfg.samples, cfg.mode, cfg.seed, cfg.tolerances, cfg.threads));
  }
  return out;
}

Verdict verify_report(const std::vector<PointReport>& reports, double sigma_threshold) {
  Verdict v;
  double sum_abs = 0.0;
  double sum_weighted = 0.0;
  double sum_sigma = 0.0;
  std::size_t n_mean = 0;
  for (const auto& rep : reports) {
    const ExpectationSet exp = expectations_for(rep.d, rep.N, rep.mode);
    const int nu = rep.N - 1;
    for (const auto& [term, frac] : exp.entries) {
      const TermReport& tr = rep.at(term);
      Check c;
      c.d = rep.d;
      c.N = rep.N;
      c.mode = rep.mode;
      c.what = std::string(term_name(term));
      c.observed = tr.mean;
      c.expected = frac.value();
      c.abs_diff = std::abs(tr.mean - c.expected);
      c.weighted_diff = 2.0 * nu * c.abs_diff;
      c.sigma_ratio = sigma_ratio(tr.mean, c.expected, tr.stderr_);
      c.pass = c.sigma_ratio <= sigma_threshold;
      if (n_mean == 0) {
        v.min_abs_diff = c.abs_diff;
        v.min_sigma_ratio = c.sigma_ratio;
      }
      v.max_abs_diff = std::max(v.max_abs_diff, c.abs_diff);
      v.min_abs_diff = std::min(v.min_abs_diff, c.abs_diff);
      v.max_weighted_diff = std::max(v.max_weighted_diff, c.weighted_diff);
      v.max_sigma_ratio = std::max(v.max_sigma_ratio, c.sigma_ratio);
      v.min_sigma_ratio = std::min(v.min_sigma_ratio, c.sigma_ratio);
      sum_abs += c.abs_diff;
      sum_weighted += c.weighted_diff;
      sum_sigma += c.sigma_ratio;
      ++n_mean;
      v.all_pass = v.all_pass && c.pass;
      v.checks.push_back(std::move(c));
    }
    if (rep.d >= 2 && rep.N >= 3) {
      const TermReport& tr = rep.at(Term::T_res);
      Check c;
      c.d = rep.d;
      c.N = rep.N;
      c.mode = rep.mode;
      c.what = "fraction_negative(T_res)";
      c.observed = tr.fraction_negative;
      c.expected = 0.5;
      c.abs_diff = std::abs(c.observed - 0.5);
      c.weighted_diff = 2.0 * nu * c.abs_diff;
      const double binom_sd = std::sqrt(0.25 / static_cast<double>(std::max<std::uint64_t>(tr.count, 1)));
      c.sigma_ratio = c.abs_diff / binom_sd;
      c.pass = c.sigma_ratio <= sigma_threshold;
      v.all_pass = v.all_pass && c.pass;
      v.checks.push_back(std::move(c));
    }
  }
  if (n_mean > 0) {
    v.mean_abs_diff = sum_abs / static_cast<double>(n_mean);
    v.mean_weighted_diff = sum_weighted / static_cast<double>(n_mean);
    v.mean_sigma_ratio = sum_sigma / static_cast<double>(n_mean);
  }
  return v;
}

}  // namespace kepart
