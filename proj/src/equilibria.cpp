#include "pgg/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "pgg/core_model.hpp"
#include "pgg/detail/roots.hpp"

namespace pgg {

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Degenerate: return "Degenerate";
  }
  return "?";
}

char stability_code(Stability s) {
  switch (s) {
    case Stability::Stable: return 'S';
    case Stability::Unstable: return 'U';
    case Stability::Degenerate: return 'D';
  }
  return '?';
}

bool EquilibriumSet::all_simple() const noexcept {
  return std::none_of(roots.begin(), roots.end(),
                      [](const Equilibrium& e) { return e.stability == Stability::Degenerate; });
}

std::vector<Stability> EquilibriumSet::pattern() const {
  std::vector<Stability> out;
  out.reserve(roots.size());
  for (const auto& e : roots) out.push_back(e.stability);
  return out;
}

void RootFinderConfig::validate() const {
  if (grid_points < 16) throw InvalidParameter("grid", "must be >= 16");
  if (!(tol_x > 0.0)) throw InvalidParameter("tol", "must be positive");
  if (!(tol_residual > 0.0)) throw InvalidParameter("tol_residual", "must be positive");
  if (!(tangency_tol > 0.0)) throw InvalidParameter("tangency_tol", "must be positive");
  if (!(tol_deriv > 0.0)) throw InvalidParameter("tol_deriv", "must be positive");
}

int RootFinderConfig::effective_grid(int d) const noexcept { return std::max(grid_points, 64 * d); }

MoreThanFourRoots::MoreThanFourRoots(const GameParameters& p, std::size_t count)
    : Error("found " + std::to_string(count) + " roots (at most four expected) for " + describe(p)),
      count_(count) {}

double gain_scale(const GameParameters& p, int grid_points) {
  const int n = std::max(grid_points, 2);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(gain(static_cast<double>(i) / (n - 1), p)));
  return scale;
}

namespace {

Equilibrium make_equilibrium(double x, const GameParameters& p, const RootFinderConfig& cfg, double scale) {
  Equilibrium e;
  e.x = x;
  e.residual = std::abs(gain(x, p));
  e.slope = gain_derivative(x, p, 1);
  e.boundary = x == 0.0 || x == 1.0;
  const double tol = cfg.tol_deriv * scale;
  if (e.slope < -tol)
    e.stability = Stability::Stable;
  else if (e.slope > tol)
    e.stability = Stability::Unstable;
  else
    e.stability = Stability::Degenerate;
  return e;
}

detail::IsolationResult isolate(const GameParameters& p, const RootFinderConfig& cfg, int grid) {
  detail::IsolationSettings s;
  s.grid_points = grid;
  s.tol_x = cfg.tol_x;
  s.tangency_rel = cfg.tangency_tol;
  return detail::isolate_roots([&](double x) { return gain(x, p); },
                               [&](double x) { return gain_derivative(x, p, 1); }, 0.0, 1.0, s);
}

}  // namespace

Equilibrium classify(double x, const GameParameters& p, const RootFinderConfig& cfg, double scale) {
  const double g = gain(x, p);
  if (!(std::abs(g) <= cfg.tol_residual * scale))
    throw NotAnEquilibrium("x = " + std::to_string(x) + " is not an equilibrium (|G| = " +
                           std::to_string(std::abs(g)) + ")");
  return make_equilibrium(x, p, cfg, scale);
}

Equilibrium classify(double x, const GameParameters& p, const RootFinderConfig& cfg) {
  return classify(x, p, cfg, gain_scale(p, cfg.effective_grid(p.d)));
}

EquilibriumSet find_equilibria(const GameParameters& p, const RootFinderConfig& cfg) {
  cfg.validate();
  int grid = cfg.effective_grid(p.d);
  auto found = isolate(p, cfg, grid);
  if (found.roots.size() > 4) {
    grid *= 4;
    found = isolate(p, cfg, grid);
    if (found.roots.size() > 4) throw MoreThanFourRoots(p, found.roots.size());
  }

  EquilibriumSet set;
  set.method = SolveMethod::GridBisection;
  set.scale = found.scale;
  for (const auto& c : found.roots) {
    auto e = make_equilibrium(c.x, p, cfg, found.scale);
    if (c.tangency) e.stability = Stability::Degenerate;
    set.roots.push_back(e);
  }
  return set;
}

double no_incentive_root(const GameParameters& p) {
  const auto k = baseline_coefficients(p);
  const double disc = k.linear * k.linear - 4.0 * k.quadratic * p.mu;
  return 2.0 * p.mu / (std::sqrt(std::max(disc, 0.0)) - k.linear);
}

double no_incentive_q_threshold(const GameParameters& p) {
  const double d = p.d;
  return (d - p.r) / ((d - 2.0) * p.r + d);
}

QuadraticEquilibria quadratic_equilibria(const GameParameters& p) {
  if (p.delta != 0.0) throw WrongMode("quadratic_equilibria requires delta = 0");
  const RootFinderConfig cfg;
  const double scale = gain_scale(p, cfg.effective_grid(p.d));
  QuadraticEquilibria out;
  out.set.method = SolveMethod::ClosedForm;
  out.set.scale = scale;
  auto add = [&](double x) { out.set.roots.push_back(make_equilibrium(x, p, cfg, scale)); };

  if (p.mu == 0.0 && p.q == 0.0) {
    add(0.0);
    add(1.0);
  } else if (p.mu == 0.0) {
    add(0.0);
    if (p.q > no_incentive_q_threshold(p)) {
      const double d = p.d;
      const double x1 = ((d - 2.0) * p.q * p.r + d * (p.q - 1.0) + p.r) /
                        (d * (2.0 * p.q * p.r - 1.0) - 2.0 * p.q * p.r + p.r);
      if (x1 > 0.0 && x1 <= 1.0) add(x1);
    }
  } else {
    const double x1 = no_incentive_root(p);
    add(x1);
    const auto k = baseline_coefficients(p);
    if (k.quadratic != 0.0) out.discarded = p.mu / (k.quadratic * x1);
  }
  return out;
}

namespace {

struct ThresholdBranches {
  double mutation;   // mu / (b (1-w) q)
  double selection;  // (c/2d)(d-r) / ((a w + b(1-w)) (1 - 2^-d))
};

ThresholdBranches threshold_branches(const GameParameters& p) {
  const double d = p.d;
  ThresholdBranches t;
  t.mutation = p.mu / (p.b_lev * (1.0 - p.omega) * p.q);
  t.selection = (p.c / (2.0 * d)) * (d - p.r) /
                ((p.a_lev * p.omega + p.b_lev * (1.0 - p.omega)) * (1.0 - std::ldexp(1.0, -p.d)));
  return t;
}

}  // namespace

double incentive_threshold(const GameParameters& p) {
  const auto t = threshold_branches(p);
  return std::max(t.mutation, t.selection);
}

double small_incentive_threshold(const GameParameters& p) {
  const auto t = threshold_branches(p);
  return std::min(t.mutation, t.selection);
}

std::optional<Equilibrium> largest_equilibrium(const EquilibriumSet& set) {
  if (set.roots.empty()) return std::nullopt;
  return set.roots.back();
}

}  // namespace pgg
