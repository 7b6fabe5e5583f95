#include "pgg/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "pgg/core_model.hpp"
#include "pgg/detail/roots.hpp"

namespace pgg {

namespace {

constexpr double kPoleWindow = 1e-9;

void require_off_pole(double x) {
  if (std::abs(x - 0.5) < kPoleWindow) throw SingularAtHalf("mu_of_x is singular at x = 1/2");
}

GameParameters without_mu(GameParameters p) {
  p.mu = 0.0;
  return p;
}

}  // namespace

double mu_of_x(double x, const GameParameters& p) {
  require_off_pole(x);
  const double d = p.d;
  const double den = 2.0 * x - 1.0;
  const double incentive =
      p.delta * (p.a_lev * p.omega * (complement_power(x, p.d) - 1.0) * (p.q + x - 1.0) -
                 p.b_lev * (p.omega - 1.0) * (unit_power(x, p.d) - 1.0) * (p.q - x));
  const double selection =
      p.c * x * (d * (x - 1.0 + p.q * (p.r - 2.0 * p.r * x + 1.0)) + (2.0 * p.q - 1.0) * p.r * (x - 1.0)) / d;
  return (incentive + selection) / den;
}

double mu_of_x_via_gain(double x, const GameParameters& p) {
  require_off_pole(x);
  return gain(x, without_mu(p)) / (2.0 * x - 1.0);
}

double critical_numerator(double x, const GameParameters& p) {
  const auto p0 = without_mu(p);
  return p.d * ((2.0 * x - 1.0) * gain_derivative(x, p0, 1) - 2.0 * gain(x, p0));
}

double critical_numerator_derivative(double x, const GameParameters& p) {
  return p.d * (2.0 * x - 1.0) * gain_derivative(x, without_mu(p), 2);
}

std::string_view to_string(Side s) { return s == Side::LeftOfHalf ? "left" : "right"; }

int BifurcationDiagram::intersection_count(double mu0) const {
  int count = 0;
  for (const auto* nodes : {&left_nodes, &right_nodes}) {
    for (std::size_t i = 0; i + 1 < nodes->size(); ++i) {
      const double m0 = (*nodes)[i].mu - mu0;
      const double m1 = (*nodes)[i + 1].mu - mu0;
      if (detail::sign_of(m0) * detail::sign_of(m1) < 0) ++count;
    }
    // Exact hits on nodes, each counted once.
    for (const auto& n : *nodes)
      if (n.mu == mu0) ++count;
  }
  return count;
}

namespace {

std::vector<double> critical_abscissae(const GameParameters& p, double lo, double hi, int grid) {
  detail::IsolationSettings s;
  s.grid_points = grid;
  s.tol_x = 1e-14;
  const auto found = detail::isolate_roots([&](double x) { return critical_numerator(x, p); },
                                           [&](double x) { return critical_numerator_derivative(x, p); }, lo, hi, s);
  std::vector<double> out;
  for (const auto& c : found.roots)
    if (c.x > 0.0 && c.x < 1.0) out.push_back(c.x);
  return out;
}

int axis_crossings(const GameParameters& p, double window, int grid) {
  detail::IsolationSettings s;
  s.grid_points = grid;
  const auto p0 = without_mu(p);
  const auto found = detail::isolate_roots([&](double x) { return gain(x, p0); },
                                           [&](double x) { return gain_derivative(x, p0, 1); }, 0.0, 1.0, s);
  return static_cast<int>(std::count_if(found.roots.begin(), found.roots.end(), [&](const detail::RootCandidate& c) {
    return std::abs(c.x - 0.5) >= std::max(window, kPoleWindow);
  }));
}

}  // namespace

BifurcationDiagram build_diagram(const GameParameters& p, int grid, double exclusion_window) {
  if (grid < 512) throw InvalidParameter("grid", "must be >= 512");
  if (!(exclusion_window >= 0.0) || exclusion_window >= 0.5)
    throw InvalidParameter("exclusion-window", "must lie in [0, 1/2)");

  BifurcationDiagram diag;
  diag.exclusion_window = exclusion_window;
  const double left_edge = 0.5 - exclusion_window;
  const double right_edge = 0.5 + exclusion_window;

  const int half = grid / 2;
  for (int i = 0; i < half; ++i) {
    const double x = left_edge * i / (half - 1);
    const double m = mu_of_x(x, p);
    if (m >= 0.0 && m <= 1.0) diag.samples.push_back({x, m, Side::LeftOfHalf});
  }
  for (int i = 0; i < half; ++i) {
    const double x = right_edge + (1.0 - right_edge) * i / (half - 1);
    const double m = mu_of_x(x, p);
    if (m >= 0.0 && m <= 1.0) diag.samples.push_back({x, m, Side::RightOfHalf});
  }

  const int fine = std::max({grid, 4096, 64 * p.d});
  const auto left = critical_abscissae(p, 0.0, left_edge, fine / 2);
  const auto right = critical_abscissae(p, right_edge, 1.0, fine / 2);

  diag.left_nodes.push_back({0.0, mu_of_x(0.0, p)});
  for (double x : left) {
    const CriticalPoint cp{x, mu_of_x(x, p)};
    diag.critical_points.push_back(cp);
    diag.left_nodes.push_back(cp);
  }
  diag.left_nodes.push_back({left_edge, mu_of_x(left_edge, p)});
  diag.right_nodes.push_back({right_edge, mu_of_x(right_edge, p)});
  for (double x : right) {
    const CriticalPoint cp{x, mu_of_x(x, p)};
    diag.critical_points.push_back(cp);
    diag.right_nodes.push_back(cp);
  }
  diag.right_nodes.push_back({1.0, mu_of_x(1.0, p)});

  auto& sig = diag.signature;
  sig.left_criticals = static_cast<int>(left.size());
  sig.right_criticals = static_cast<int>(right.size());
  sig.sign_at_0 = detail::sign_of(diag.left_nodes.front().mu);
  sig.sign_at_1 = detail::sign_of(diag.right_nodes.back().mu);
  sig.axis_crossings = axis_crossings(p, exclusion_window, fine);
  return diag;
}

std::vector<CriticalPoint> saddle_nodes(const GameParameters& p) {
  validate(p, Validation::Census);
  return build_diagram(p).critical_points;
}

}  // namespace pgg
