#include "pgg/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "pgg/core_model.hpp"

namespace pgg {

LimitModel limit_model(const GameParameters& p) {
  const double a = p.a_lev, b = p.b_lev, w = p.omega, q = p.q, r = p.r, c = p.c;
  LimitModel m;
  m.g1_slope = p.delta * (b * (1.0 - w) - a * w);
  m.g1_intercept = p.delta * (a * (1.0 - q) * w - b * q * (1.0 - w));
  m.g2_coeffs = {c * (2.0 * q * r - 1.0), c * (1.0 - q - q * r) + 2.0 * p.mu, -p.mu};
  return m;
}

std::vector<LimitRoot> limit_roots(const LimitModel& model) {
  // g1 - g2 = A x^2 + B x + C
  const double A = -model.g2_coeffs[0];
  const double B = model.g1_slope - model.g2_coeffs[1];
  const double C = model.g1_intercept - model.g2_coeffs[2];
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C)) throw Error("limit model is not finite");

  std::vector<double> xs;
  if (std::abs(A) < 1e-14) {
    if (std::abs(B) < 1e-14) throw DegenerateQuadratic("limit model has vanishing quadratic and linear terms");
    xs.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      const double t = -0.5 * (B + std::copysign(s, B));
      xs.push_back(t / A);
      if (t != 0.0) xs.push_back(C / t);
    }
  }

  std::vector<LimitRoot> out;
  for (double x : xs) {
    if (x < -1e-12 || x > 1.0 + 1e-12) continue;
    x = std::clamp(x, 0.0, 1.0);
    out.push_back({x, std::abs(model.gain_slope(x))});
  }
  std::sort(out.begin(), out.end(), [](const LimitRoot& l, const LimitRoot& r) { return l.x < r.x; });
  if (out.size() == 2 && out[0].x == out[1].x) out.pop_back();
  return out;
}

double no_incentive_limit(const GameParameters& p) {
  const double k = p.q * p.r + p.q - 1.0;
  const double root = std::sqrt(p.c * p.c * k * k + 4.0 * p.c * p.mu * p.q * (p.r - 1.0) + 4.0 * p.mu * p.mu);
  return 2.0 * p.mu / (root - p.c * k + 2.0 * p.mu);
}

double limit_gap(const GameParameters& p, double lo, double hi, int points) {
  const auto m = limit_model(p);
  const int n = std::max(points, 2);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    worst = std::max(worst, std::abs(gain(x, p) - m.gain(x)));
  }
  return worst;
}

}  // namespace pgg
