#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pgg/params.hpp"

namespace pgg {

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class NegativeFrequency : public Error {
 public:
  using Error::Error;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> states;
};

/// Fixed-step RK4 for dx/dt = G(x). States that leave [0, 1] by at most 1e-9
/// are clamped; anything larger throws StepTooLarge. Every `stride`-th step
/// is recorded, plus the final one.
Trajectory integrate_scalar(double x0, const GameParameters& p, double t_end, double dt = 1e-3,
                            std::size_t stride = 1);

/// Fitness of each strategy given the full frequency vector.
using PayoffKernel = std::function<std::vector<double>(const std::vector<double>&)>;

using Matrix = std::vector<std::vector<double>>;

struct SimplexState {
  std::vector<double> frequencies;
  PayoffKernel payoff_kernel;
  /// mutation_matrix[j][i]: probability that an offspring of j is of type i.
  Matrix mutation_matrix;
  double mu = 0.0;

  /// Throws Error if the frequencies are off the simplex by more than 1e-9,
  /// a row of the mutation matrix misses 1 by more than 1e-12, or the
  /// shapes disagree.
  void validate() const;
};

struct SimplexTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

/// dx_i/dt = sum_j x_j f_j Q_ji - x_i f_bar - mu (n x_i - 1), integrated with
/// fixed-step RK4. Throws NegativeFrequency if a component drops below -1e-9.
SimplexTrajectory integrate_simplex(const SimplexState& state, double t_end, double dt = 1e-3,
                                    std::size_t stride = 1);

/// Two-strategy kernel (cooperators, defectors) built from the game's payoff
/// table; the cooperator frequency is the first component.
PayoffKernel pgg_kernel(const GameParameters& p);

/// Q with 1-q on the diagonal and q spread evenly over the other entries.
Matrix uniform_mutation_matrix(std::size_t n, double q);

}  // namespace pgg
