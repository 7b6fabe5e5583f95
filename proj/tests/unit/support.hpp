#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "pgg/montecarlo.hpp"
#include "pgg/params.hpp"

namespace testing {

inline pgg::GameParameters make(int d, double b, double a, double delta, double r, double omega, double mu, double q,
                                double c) {
  pgg::GameParameters p;
  p.d = d;
  p.b_lev = b;
  p.a_lev = a;
  p.delta = delta;
  p.r = r;
  p.omega = omega;
  p.mu = mu;
  p.q = q;
  p.c = c;
  return p;
}

// The five parameter sets used to illustrate 0 to 4 equilibria.
inline pgg::GameParameters reference_a() { return make(7, 17.64, 6.18, 0.48, 1.16, 0.465, 0.415, 0.4505, 20); }
inline pgg::GameParameters reference_b() { return make(6, 0.0001, 15.32, 1, 5.57, 0.133, 0.643, 0.3335, 1); }
inline pgg::GameParameters reference_c() { return make(5, 7.08, 3.04, 16.4, 3.8, 0.133, 0.195, 0.171, 212); }
inline pgg::GameParameters reference_d() { return make(6, 0.2, 1.1, 18.68, 1.18, 0.039, 0.614, 0.08, 11.38); }
inline pgg::GameParameters reference_e() { return make(11, 3.66, 6.04, 16.4, 1.05, 0.133, 0.643, 0.195, 174); }
// reference_e with q one decade smaller: a genuine four-root configuration.
inline pgg::GameParameters four_roots() { return make(11, 3.66, 6.04, 16.4, 1.05, 0.133, 0.643, 0.0195, 174); }

// Strict-mode draw i of stream `seed`, d uniform in [d_min, d_max].
inline pgg::GameParameters draw(std::uint64_t seed, std::uint64_t i, int d_min = 3, int d_max = 12) {
  pgg::SplitMix64 rng(pgg::mix_seed(seed, i));
  const int d = d_min + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d_max - d_min + 1));
  return pgg::sample_params(d, rng);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing
