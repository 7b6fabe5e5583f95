#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pgg/equilibria.hpp"
#include "pgg/params.hpp"

namespace pgg {

/// SplitMix64 (Steele, Lea and Flood). Used as a counter-based generator:
/// every draw gets its own stream seeded with mix_seed(seed, index).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi);

  static std::uint64_t finalize(std::uint64_t z);

 private:
  std::uint64_t state_;
};

/// Seed of the per-draw stream `index` under the run seed `seed`.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct SamplingRanges {
  Interval omega{0.0, 1.0};
  Interval mu{0.0, 1.0};
  Interval delta{0.0, 10.0};
  Interval c{0.0, 5.0};
  double r_lo = 1.0;
  std::optional<double> r_hi;  // group size d when unset
  Interval q{0.0, 0.5};

  /// Throws Error unless every interval is non-empty and inside the strict
  /// parameter ranges for group size d.
  void validate(int d) const;
};

/// Ranges of the leverage factors, which the sampling protocol leaves open.
struct LeverageRanges {
  Interval a{0.0, 20.0};
  Interval b{0.0, 20.0};
};

/// One strict-mode parameter draw. Order of consumption from the stream:
/// omega, mu, delta, c, r, q, a, b.
GameParameters sample_params(int d, SplitMix64& rng, const SamplingRanges& ranges = {},
                             const LeverageRanges& ab = {});

struct CountHistogram {
  std::array<std::uint64_t, 5> counts{};  // index = number of roots
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
  int d = 0;
  std::uint64_t retried = 0;  // draws that needed the refined-grid retry

  void merge(const CountHistogram& other);
  double fraction(int roots) const;
  friend bool operator==(const CountHistogram&, const CountHistogram&) = default;
};

struct SampleOptions {
  SamplingRanges ranges;
  LeverageRanges ab;
  RootFinderConfig finder;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Root-count histogram over `draws` random parameter sets. The result
/// depends only on (d, draws, seed, ranges), not on the thread count.
CountHistogram sample_counts(int d, std::uint64_t draws, std::uint64_t seed, const SampleOptions& opts = {});

/// Counts for draws [begin, end) only; merging consecutive shards gives the
/// same histogram as one call over the union.
CountHistogram sample_counts_range(int d, std::uint64_t begin, std::uint64_t end, std::uint64_t seed,
                                   const SampleOptions& opts = {});

/// find_equilibria with one retry on a 16x finer grid before giving up.
EquilibriumSet find_equilibria_with_retry(const GameParameters& p, const RootFinderConfig& cfg,
                                          bool* retried = nullptr);

}  // namespace pgg
