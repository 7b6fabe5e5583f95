#pragma once

#include <string_view>
#include <vector>

#include "pgg/analysis.hpp"
#include "pgg/params.hpp"

namespace pgg {

/// The mu that makes x an equilibrium: G(x) = 0 solved for mu, in the
/// expanded form. Throws SingularAtHalf for |x - 1/2| < 1e-9.
double mu_of_x(double x, const GameParameters& p);

/// Same quantity computed as G(x; mu = 0) / (2x - 1).
double mu_of_x_via_gain(double x, const GameParameters& p);

/// d (2x-1)^2 times the derivative of mu_of_x. Shares its zeros with that
/// derivative away from x = 1/2 and is smooth across it.
double critical_numerator(double x, const GameParameters& p);
double critical_numerator_derivative(double x, const GameParameters& p);

enum class Side { LeftOfHalf, RightOfHalf };

std::string_view to_string(Side s);

struct BifurcationSample {
  double x = 0.0;
  double mu_value = 0.0;
  Side side = Side::LeftOfHalf;
};

struct CriticalPoint {
  double x = 0.0;
  double mu = 0.0;
};

struct DiagramSignature {
  int left_criticals = 0;
  int right_criticals = 0;
  int sign_at_0 = 0;
  int sign_at_1 = 0;
  int axis_crossings = 0;

  friend bool operator==(const DiagramSignature&, const DiagramSignature&) = default;
};

struct BifurcationDiagram {
  /// Samples of both branches with mu clipped to [0, 1], ascending in x.
  std::vector<BifurcationSample> samples;
  std::vector<CriticalPoint> critical_points;
  DiagramSignature signature;
  double exclusion_window = 0.0;

  /// Branch nodes (x, mu) between which mu_of_x is monotone: the interval
  /// end, every critical point, and the edge of the exclusion window.
  std::vector<CriticalPoint> left_nodes;
  std::vector<CriticalPoint> right_nodes;

  /// Number of x in [0, 1] outside the window with mu_of_x(x) = mu0,
  /// counted on the unclipped curve.
  int intersection_count(double mu0) const;
};

/// grid: number of samples (>= 512). exclusion_window: half-width of the
/// gap left around x = 1/2; zero makes the sampler hit the pole.
BifurcationDiagram build_diagram(const GameParameters& p, int grid = 4096, double exclusion_window = 1e-6);

/// Critical points of mu_of_x in (0, 1) away from 1/2, where two equilibria
/// merge as mu crosses the critical value.
std::vector<CriticalPoint> saddle_nodes(const GameParameters& p);

}  // namespace pgg
