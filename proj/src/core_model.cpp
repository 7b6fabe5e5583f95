#include "pgg/core_model.hpp"

#include <cmath>

namespace pgg {

namespace {

constexpr int kExactPowerLimit = 64;

struct IncentiveWeights {
  double reward;      // a w delta
  double punishment;  // b (1-w) delta
};

IncentiveWeights incentive_weights(const GameParameters& p) {
  return {p.a_lev * p.omega * p.delta, p.b_lev * (1.0 - p.omega) * p.delta};
}

// Binomial weight C(m, k) x^k (1-x)^(m-k), for large m.
double log_space_weight(int m, int k, double x) {
  const double log_binom = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
  return std::exp(log_binom + k * std::log(x) + (m - k) * std::log1p(-x));
}

}  // namespace

double unit_power(double base, int n) {
  if (n == 0) return 1.0;
  if (base <= 0.0) return 0.0;
  if (base >= 1.0) return 1.0;
  if (n > kExactPowerLimit) return std::exp(n * std::log(base));
  double result = 1.0;
  double factor = base;
  for (unsigned e = static_cast<unsigned>(n); e != 0; e >>= 1) {
    if (e & 1u) result *= factor;
    factor *= factor;
  }
  return result;
}

double complement_power(double x, int n) {
  if (n == 0) return 1.0;
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  if (n > kExactPowerLimit) return std::exp(n * std::log1p(-x));
  return unit_power(1.0 - x, n);
}

PayoffTable payoff_entries(const GameParameters& p) {
  const double d = p.d;
  const auto w = incentive_weights(p);
  PayoffTable table;
  table.entries.reserve(static_cast<std::size_t>(p.d));
  for (int k = 0; k < p.d; ++k) {
    PayoffPair e;
    e.cooperator = (k + 1) * p.c * p.r / d - p.c + w.reward * d / (k + 1);
    e.defector = k * p.r * p.c / d - w.punishment * d / (d - k);
    table.entries.push_back(e);
  }
  return table;
}

FitnessPair average_fitness(double x, const PayoffTable& table) {
  const int m = table.group_size() - 1;
  if (m < 0) return {};
  if (x <= 0.0) return {table.entries.front().cooperator, table.entries.front().defector};
  if (x >= 1.0) return {table.entries.back().cooperator, table.entries.back().defector};

  FitnessPair f;
  if (m <= 1000) {
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
      if (k > 0) binom = binom * (m - k + 1) / k;
      const double w = binom * unit_power(x, k) * complement_power(x, m - k);
      f.cooperator += w * table.entries[static_cast<std::size_t>(k)].cooperator;
      f.defector += w * table.entries[static_cast<std::size_t>(k)].defector;
    }
  } else {
    for (int k = 0; k <= m; ++k) {
      const double w = log_space_weight(m, k, x);
      f.cooperator += w * table.entries[static_cast<std::size_t>(k)].cooperator;
      f.defector += w * table.entries[static_cast<std::size_t>(k)].defector;
    }
  }
  return f;
}

BaselineCoefficients baseline_coefficients(const GameParameters& p) {
  const double d = p.d;
  BaselineCoefficients b;
  b.quadratic = -(p.c / d) * (2.0 * p.r * p.q * (d - 1.0) + (p.r - d));
  b.linear = (p.c / d) * (p.r * p.q * (d - 1.0) + (p.r - d) * (1.0 - p.q)) - 2.0 * p.mu;
  b.constant = p.mu;
  return b;
}

double baseline_part(double x, const GameParameters& p) {
  const auto k = baseline_coefficients(p);
  return (k.quadratic * x + k.linear) * x + k.constant;
}

double incentive_part_derivative(double x, const GameParameters& p, int order) {
  const auto w = incentive_weights(p);
  const int d = p.d;
  const double dd = d;
  const double q = p.q;
  const double u = 1.0 - x;
  switch (order) {
    case 0:
      return w.reward * (u - q) * (1.0 - complement_power(x, d)) +
             w.punishment * (x - q) * (1.0 - unit_power(x, d));
    case 1: {
      const double left = 1.0 - (dd + 1.0) * complement_power(x, d) + dd * q * complement_power(x, d - 1);
      const double right = 1.0 - (dd + 1.0) * unit_power(x, d) + dd * q * unit_power(x, d - 1);
      return -w.reward * left + w.punishment * right;
    }
    case 2: {
      const double left = complement_power(x, d - 2) * ((dd + 1.0) * u - (dd - 1.0) * q);
      const double right = unit_power(x, d - 2) * ((dd + 1.0) * x - (dd - 1.0) * q);
      return -dd * (w.reward * left + w.punishment * right);
    }
    case 3: {
      const double left = complement_power(x, d - 3) * ((dd + 1.0) * u - (dd - 2.0) * q);
      const double right = unit_power(x, d - 3) * ((dd + 1.0) * x - (dd - 2.0) * q);
      return dd * (dd - 1.0) * (w.reward * left - w.punishment * right);
    }
    default:
      throw Error("incentive_part_derivative: order must be 0..3");
  }
}

double incentive_part(double x, const GameParameters& p) { return incentive_part_derivative(x, p, 0); }

double gain(double x, const GameParameters& p) {
  if (p.delta == 0.0) return baseline_part(x, p);
  const double d = p.d;
  const double rq = p.r * p.q * (d - 1.0);
  const double selection =
      (p.c / d) * x * (rq + (p.r - d) * (1.0 - p.q) - x * (2.0 * rq + (p.r - d)));
  return selection - p.mu * (2.0 * x - 1.0) + incentive_part(x, p);
}

double gain_via_payoffs(double x, const GameParameters& p) {
  const auto f = average_fitness(x, payoff_entries(p));
  return p.q * ((1.0 - x) * f.defector - x * f.cooperator) +
         x * (1.0 - x) * (f.cooperator - f.defector) - p.mu * (2.0 * x - 1.0);
}

double gain_derivative(double x, const GameParameters& p, int order) {
  const auto k = baseline_coefficients(p);
  switch (order) {
    case 1:
      return 2.0 * k.quadratic * x + k.linear + incentive_part_derivative(x, p, 1);
    case 2:
      return 2.0 * k.quadratic + incentive_part_derivative(x, p, 2);
    case 3:
      return incentive_part_derivative(x, p, 3);
    default:
      throw Error("gain_derivative: order must be 1, 2 or 3");
  }
}

GainEvaluation evaluate_gain(double x, const GameParameters& p) {
  return {x, gain(x, p), gain_derivative(x, p, 1), gain_derivative(x, p, 2), gain_derivative(x, p, 3)};
}

}  // namespace pgg
