#pragma once

#include <array>
#include <vector>

#include "pgg/params.hpp"

namespace pgg {

/// Large-d approximants. In gain convention G(x) ~ g1(x) - g2(x) away from
/// the boundary layers near 0 and 1: g1 is the limit of incentive_part and
/// g2 the limit of -baseline_part.
struct LimitModel {
  double g1_slope = 0.0;
  double g1_intercept = 0.0;
  std::array<double, 3> g2_coeffs{};  // a2, a1, a0 of a2 x^2 + a1 x + a0

  double g1(double x) const { return g1_slope * x + g1_intercept; }
  double g2(double x) const { return (g2_coeffs[0] * x + g2_coeffs[1]) * x + g2_coeffs[2]; }
  double gain(double x) const { return g1(x) - g2(x); }
  double gain_slope(double x) const { return g1_slope - 2.0 * g2_coeffs[0] * x - g2_coeffs[1]; }
};

LimitModel limit_model(const GameParameters& p);

class DegenerateQuadratic : public Error {
 public:
  using Error::Error;
};

struct LimitRoot {
  double x = 0.0;
  double slope_magnitude = 0.0;  // |d(g1 - g2)/dx| at the root
};

/// Roots of g1 - g2 in [0, 1], ascending. Falls back to the linear equation
/// when |a2| < 1e-14 and throws DegenerateQuadratic if that vanishes too.
std::vector<LimitRoot> limit_roots(const LimitModel& model);

/// Limit of the no-incentive root as d grows (mu, q > 0).
double no_incentive_limit(const GameParameters& p);

/// max |G(x) - model.gain(x)| over `points` evenly spaced x in [lo, hi].
double limit_gap(const GameParameters& p, double lo = 0.2, double hi = 0.8, int points = 601);

}  // namespace pgg
