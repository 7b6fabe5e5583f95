#pragma once

#include <vector>

#include "pgg/params.hpp"

namespace pgg {

/// Payoffs in a group with k other cooperators: `cooperator` for a
/// cooperator, `defector` for a defector.
struct PayoffPair {
  double cooperator = 0.0;
  double defector = 0.0;
};

/// Payoff entries for k = 0 .. d-1.
struct PayoffTable {
  std::vector<PayoffPair> entries;
  int group_size() const noexcept { return static_cast<int>(entries.size()); }
};

struct FitnessPair {
  double cooperator = 0.0;  // f1
  double defector = 0.0;    // f2
};

/// The gain function and its first three derivatives at one point.
struct GainEvaluation {
  double x = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Coefficients of the delta-free part of the gain, A x^2 + B x + mu.
struct BaselineCoefficients {
  double quadratic = 0.0;  // A
  double linear = 0.0;     // B
  double constant = 0.0;   // mu
};

PayoffTable payoff_entries(const GameParameters& p);

/// Binomially weighted average payoffs of cooperators and defectors at
/// cooperator frequency x.
FitnessPair average_fitness(double x, const PayoffTable& table);

BaselineCoefficients baseline_coefficients(const GameParameters& p);

/// A x^2 + B x + mu: everything in the gain that does not scale with delta.
double baseline_part(double x, const GameParameters& p);

/// a w delta (1-x-q)(1-(1-x)^d) + b (1-w) delta (x-q)(1-x^d).
double incentive_part(double x, const GameParameters& p);

/// Derivative of incentive_part of the given order (0..3).
double incentive_part_derivative(double x, const GameParameters& p, int order);

/// Closed-form gain G(x) = baseline_part + incentive_part.
double gain(double x, const GameParameters& p);

/// G(x) = q[(1-x) f2 - x f1] + x(1-x)(f1 - f2) - mu(2x - 1), summed directly
/// from the payoff table. O(d) per call; kept independent of the closed form.
double gain_via_payoffs(double x, const GameParameters& p);

/// Analytic derivative of the closed form, order in {1, 2, 3}.
double gain_derivative(double x, const GameParameters& p, int order);

GainEvaluation evaluate_gain(double x, const GameParameters& p);

/// base^n for base in [0, 1]. Uses exp(n log base) when n > 64 so that large
/// group sizes neither lose accuracy nor underflow abruptly.
double unit_power(double base, int n);

/// (1 - x)^n for x in [0, 1], computed without forming 1 - x when n > 64.
double complement_power(double x, int n);

}  // namespace pgg
