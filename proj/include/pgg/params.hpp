#pragma once

#include <stdexcept>
#include <string>

namespace pgg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its permitted range. `field()` names the
/// offending parameter using the same spelling as the command-line flag.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Validation {
  /// Interior ranges: d >= 3, 1 < r < d, c > 0, 0 < q < 1/2, 0 < mu < 1,
  /// delta > 0, a > 0, b > 0, 0 < omega < 1.
  Strict,
  /// Strict ranges plus the boundary values q in {0, 1/2}, mu in {0, 1},
  /// omega in {0, 1} and delta = 0.
  Census,
};

/// Parameters of the d-player public goods game under replicator-mutator
/// dynamics with institutional incentives.
struct GameParameters {
  int d = 3;            ///< group size
  double r = 2.0;       ///< multiplication factor
  double c = 1.0;       ///< contribution cost
  double q = 0.1;       ///< multiplicative mutation probability
  double mu = 0.1;      ///< additive mutation rate
  double delta = 0.0;   ///< per-capita incentive budget
  double a_lev = 1.0;   ///< reward leverage
  double b_lev = 1.0;   ///< punishment leverage
  double omega = 0.5;   ///< share of the budget spent on reward

  friend bool operator==(const GameParameters&, const GameParameters&) = default;
};

/// Throws InvalidParameter naming the first field that violates `mode`.
void validate(const GameParameters& p, Validation mode);

/// Validates and returns `p`, for use at construction sites.
GameParameters checked(GameParameters p, Validation mode);

bool is_valid(const GameParameters& p, Validation mode) noexcept;

/// Human readable one-line echo of every field.
std::string describe(const GameParameters& p);

}  // namespace pgg
