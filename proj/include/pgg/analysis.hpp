#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pgg/equilibria.hpp"
#include "pgg/montecarlo.hpp"
#include "pgg/params.hpp"

namespace pgg {

enum class Constraint { DeltaZero, OmegaZero, OmegaOne, MuZero, MuOne, QZero };

std::string_view to_string(Constraint c);

class IncompatibleConstraints : public Error {
 public:
  using Error::Error;
};

/// One cell of the special-case table: one or two pinned boundary values
/// and the root counts the table allows.
class CensusCase {
 public:
  /// Throws IncompatibleConstraints for mu=0 with mu=1, omega=0 with
  /// omega=1, a repeated constraint, or more than two constraints.
  static CensusCase make(std::vector<Constraint> constraints);
  /// Parses names such as "q0", "mu1", "omega0+q0".
  static CensusCase parse(std::string_view name);

  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::vector<int>& allowed_counts() const noexcept { return allowed_; }
  bool allows(int count) const;
  bool has(Constraint c) const;
  std::string name() const;
  /// Copy of p with the pinned values substituted exactly.
  GameParameters apply(GameParameters p) const;

 private:
  std::vector<Constraint> constraints_;
  std::vector<int> allowed_;
};

/// The 19 compatible cells: six single constraints and 13 pairs.
std::vector<CensusCase> all_census_cases();

struct CensusOptions {
  int d_min = 3;
  int d_max = 12;
  SamplingRanges ranges;
  LeverageRanges ab;
  RootFinderConfig finder;
  unsigned threads = 0;
  double carve_out_band = 1e-12;  // |mu - b q delta| for omega = 1 cells
};

struct CensusReport {
  std::string case_name;
  std::vector<int> allowed;
  std::array<std::uint64_t, 5> counts{};
  std::uint64_t draws = 0;    // evaluated draws
  std::uint64_t skipped = 0;  // omega = 1 carve-out hits
  bool pass = false;

  std::vector<int> observed() const;
};

/// Draws `samples` parameter sets (d uniform in [d_min, d_max], the rest
/// uniform in the strict ranges), pins the case's boundary values and counts
/// equilibria. pass = observed counts are a subset of the allowed ones.
CensusReport census_check(const CensusCase& kase, std::uint64_t samples, std::uint64_t seed,
                          const CensusOptions& opts = {});

/// True iff c(2(d-1)qr - d + r)/d > 0, i.e. the delta-free part of -G is an
/// upward parabola.
bool baseline_upturned(const GameParameters& p);

/// True iff the second derivative of incentive_part is negative at every
/// point of a uniform grid on [0, 1].
bool incentive_part_concave(const GameParameters& p, int grid = 4096);

enum class RootCountPrediction { One, Two, Inconclusive };

std::string_view to_string(RootCountPrediction r);

/// When G is concave (baseline_upturned and incentive_part_concave), its
/// root count is decided by the sign of G(0) = mu - b delta q (1-w) and, if
/// G(0) < 0, by the sign of max G. Everything else is Inconclusive.
RootCountPrediction one_or_two(const GameParameters& p, const RootFinderConfig& cfg = {});

class SingularAtHalf : public Error {
 public:
  using Error::Error;
};

struct TangencyPoint {
  double x = 0.0;
  double q_star = 0.0;
  double omega_star = 0.0;
};

struct TangencyBranches {
  double q1 = 0.0;  // + square root
  double q2 = 0.0;  // - square root
};

/// Values of q for which the two halves of incentive_part'' (with a = b)
/// touch at x. Defined for every x in [0, 1] and d >= 5.
TangencyBranches tangency_q_branches(double x, int d);

/// (x, q1(x), omega(x)) on the tangency locus. Throws SingularAtHalf for
/// |x - 1/2| < 1e-9.
TangencyPoint tangency_locus(double x, int d);

/// The omega that makes incentive_part''(x) vanish for given q when a = b.
double tangency_omega(double x, int d, double q);

/// Residuals of the two tangency conditions at (x, q, omega), each divided by
/// the magnitude of its largest term.
std::array<double, 2> tangency_residuals(double x, int d, double q, double omega);

struct ConcavitySensitivity {
  double d_domega = 0.0;  // d incentive_part'' / d omega
  double d_dq = 0.0;      // d incentive_part'' / d q
};

ConcavitySensitivity concavity_sensitivities(double x, const GameParameters& p);

}  // namespace pgg
