#include "pgg/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "pgg/parallel.hpp"

namespace pgg {

std::uint64_t SplitMix64::finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return finalize(state_);
}

double SplitMix64::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) {
  const double v = lo + (hi - lo) * uniform();
  if (v <= lo) return std::nextafter(lo, hi);
  if (v >= hi) return std::nextafter(hi, lo);
  return v;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64::finalize(SplitMix64::finalize(seed) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

void SamplingRanges::validate(int d) const {
  auto check = [](const Interval& iv, double lo, double hi, const char* name) {
    if (!(iv.lo < iv.hi) || iv.lo < lo || iv.hi > hi)
      throw InvalidParameter(name, "sampling interval must be non-empty and inside the permitted range");
  };
  check(omega, 0.0, 1.0, "omega");
  check(mu, 0.0, 1.0, "mu");
  check(delta, 0.0, INFINITY, "delta");
  check(c, 0.0, INFINITY, "c");
  check({r_lo, r_hi.value_or(d)}, 1.0, d, "r");
  check(q, 0.0, 0.5, "q");
}

GameParameters sample_params(int d, SplitMix64& rng, const SamplingRanges& ranges, const LeverageRanges& ab) {
  GameParameters p;
  p.d = d;
  p.omega = rng.uniform(ranges.omega.lo, ranges.omega.hi);
  p.mu = rng.uniform(ranges.mu.lo, ranges.mu.hi);
  p.delta = rng.uniform(ranges.delta.lo, ranges.delta.hi);
  p.c = rng.uniform(ranges.c.lo, ranges.c.hi);
  p.r = rng.uniform(ranges.r_lo, ranges.r_hi.value_or(d));
  p.q = rng.uniform(ranges.q.lo, ranges.q.hi);
  p.a_lev = rng.uniform(ab.a.lo, ab.a.hi);
  p.b_lev = rng.uniform(ab.b.lo, ab.b.hi);
  return p;
}

void CountHistogram::merge(const CountHistogram& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  draws += other.draws;
  retried += other.retried;
}

double CountHistogram::fraction(int roots) const {
  if (draws == 0 || roots < 0 || roots > 4) return 0.0;
  return static_cast<double>(counts[static_cast<std::size_t>(roots)]) / static_cast<double>(draws);
}

EquilibriumSet find_equilibria_with_retry(const GameParameters& p, const RootFinderConfig& cfg, bool* retried) {
  if (retried) *retried = false;
  try {
    return find_equilibria(p, cfg);
  } catch (const MoreThanFourRoots&) {
    if (retried) *retried = true;
    RootFinderConfig fine = cfg;
    fine.grid_points = cfg.effective_grid(p.d) * 16;
    return find_equilibria(p, fine);
  }
}

CountHistogram sample_counts_range(int d, std::uint64_t begin, std::uint64_t end, std::uint64_t seed,
                                   const SampleOptions& opts) {
  CountHistogram h;
  h.d = d;
  h.seed = seed;
  for (std::uint64_t i = begin; i < end; ++i) {
    SplitMix64 rng(mix_seed(seed, i));
    const auto p = sample_params(d, rng, opts.ranges, opts.ab);
    bool retried = false;
    const auto set = find_equilibria_with_retry(p, opts.finder, &retried);
    ++h.counts[set.size()];
    ++h.draws;
    if (retried) ++h.retried;
  }
  return h;
}

CountHistogram sample_counts(int d, std::uint64_t draws, std::uint64_t seed, const SampleOptions& opts) {
  if (draws < 1) throw InvalidParameter("iters", "must be >= 1");
  validate(GameParameters{.d = d, .r = 1.5, .delta = 1.0}, Validation::Strict);
  opts.ranges.validate(d);
  opts.finder.validate();

  const unsigned shards = opts.threads == 0 ? default_threads() : opts.threads;
  std::vector<CountHistogram> parts(shards);
  parallel_for(draws, shards, [&](std::uint64_t b, std::uint64_t e, unsigned s) {
    parts[s] = sample_counts_range(d, b, e, seed, opts);
  });
  CountHistogram total;
  total.d = d;
  total.seed = seed;
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace pgg
