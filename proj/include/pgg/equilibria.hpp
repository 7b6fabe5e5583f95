#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pgg/params.hpp"

namespace pgg {

enum class Stability { Stable, Unstable, Degenerate };

std::string_view to_string(Stability s);
/// Single-letter code used in CSV output: S, U or D.
char stability_code(Stability s);

struct Equilibrium {
  double x = 0.0;
  Stability stability = Stability::Degenerate;
  double residual = 0.0;  // |G(x)|
  double slope = 0.0;     // G'(x)
  bool boundary = false;  // clamped to 0 or 1
};

enum class SolveMethod { ClosedForm, GridBisection };

struct EquilibriumSet {
  std::vector<Equilibrium> roots;  // ascending in x
  SolveMethod method = SolveMethod::GridBisection;
  double scale = 1.0;  // max(1, max |G| on [0, 1])

  std::size_t size() const noexcept { return roots.size(); }
  bool all_simple() const noexcept;
  std::vector<Stability> pattern() const;
};

struct RootFinderConfig {
  int grid_points = 4096;      // raised to 64 d when smaller
  double tol_x = 1e-13;
  double tol_residual = 1e-10;  // relative to scale
  double tangency_tol = 1e-7;   // relative to scale
  double tol_deriv = 1e-8;      // relative to scale

  void validate() const;
  int effective_grid(int d) const noexcept;
};

/// More than four distinct roots survived even after a 4x grid refinement.
class MoreThanFourRoots : public Error {
 public:
  MoreThanFourRoots(const GameParameters& p, std::size_t count);
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

class NotAnEquilibrium : public Error {
 public:
  using Error::Error;
};

class WrongMode : public Error {
 public:
  using Error::Error;
};

/// max(1, max |G|) over a uniform grid on [0, 1].
double gain_scale(const GameParameters& p, int grid_points);

/// All equilibria of dx/dt = G(x) in [0, 1]. Throws MoreThanFourRoots.
EquilibriumSet find_equilibria(const GameParameters& p, const RootFinderConfig& cfg = {});

/// Stability of a point already known to be an equilibrium.
Equilibrium classify(double x, const GameParameters& p, const RootFinderConfig& cfg = {});
/// Variant with a precomputed scale, for callers that classify many roots.
Equilibrium classify(double x, const GameParameters& p, const RootFinderConfig& cfg, double scale);

struct QuadraticEquilibria {
  EquilibriumSet set;
  /// Companion root of the quadratic when both mutations are present; it lies
  /// outside [0, 1] and is reported for checking only.
  std::optional<double> discarded;
};

/// Closed-form equilibria when there is no incentive (delta = 0).
QuadraticEquilibria quadratic_equilibria(const GameParameters& p);

/// Positive root x1 for mu, q > 0, delta = 0, in the cancellation-free form.
double no_incentive_root(const GameParameters& p);

/// Mutation threshold above which x1 exists when mu = 0, delta = 0.
double no_incentive_q_threshold(const GameParameters& p);

/// Budget above which G(0) < 0 < G(1/2) holds, so that a stable equilibrium
/// lies in (1/2, 1). The delta field of p is ignored.
double incentive_threshold(const GameParameters& p);

/// Budget below which G(0) > 0 > G(1/2) holds, so that a stable equilibrium
/// lies in (0, 1/2). The delta field of p is ignored.
double small_incentive_threshold(const GameParameters& p);

/// Largest equilibrium (always stable when simple), if any.
std::optional<Equilibrium> largest_equilibrium(const EquilibriumSet& set);

}  // namespace pgg
