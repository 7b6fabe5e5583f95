#include "pgg/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "pgg/core_model.hpp"

namespace pgg {

namespace {

constexpr double kExcursion = 1e-9;

void check_time_args(double t_end, double dt, std::size_t stride) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt", "must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t-end", "must be >= 0");
  if (stride == 0) throw InvalidParameter("stride", "must be >= 1");
}

std::size_t step_count(double t_end, double dt) { return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)); }

}  // namespace

Trajectory integrate_scalar(double x0, const GameParameters& p, double t_end, double dt, std::size_t stride) {
  check_time_args(t_end, dt, stride);
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw InvalidParameter("x0", "must lie in [0, 1]");

  const auto f = [&](double x) { return gain(x, p); };
  const std::size_t steps = step_count(t_end, dt);
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  double x = x0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_end - (n - 1) * dt);
    const double k1 = f(x);
    const double k2 = f(x + 0.5 * h * k1);
    const double k3 = f(x + 0.5 * h * k2);
    const double k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (x < -kExcursion || x > 1.0 + kExcursion) {
      std::ostringstream os;
      os.precision(17);
      os << "state left [0, 1] at t = " << n * dt << " (x = " << x << "); reduce dt";
      throw StepTooLarge(os.str());
    }
    x = std::clamp(x, 0.0, 1.0);
    if (n % stride == 0 || n == steps) {
      tr.times.push_back(n == steps ? t_end : n * dt);
      tr.states.push_back(x);
    }
  }
  return tr;
}

void SimplexState::validate() const {
  const std::size_t n = frequencies.size();
  if (n < 2) throw Error("simplex: need at least two strategies");
  if (!payoff_kernel) throw Error("simplex: payoff kernel is empty");
  if (mutation_matrix.size() != n) throw Error("simplex: mutation matrix must be n x n");
  double sum = 0.0;
  for (double v : frequencies) {
    if (v < -kExcursion) throw NegativeFrequency("simplex: negative initial frequency");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kExcursion) throw Error("simplex: frequencies must sum to 1");
  for (const auto& row : mutation_matrix) {
    if (row.size() != n) throw Error("simplex: mutation matrix must be n x n");
    double rs = 0.0;
    for (double v : row) {
      if (v < 0.0) throw Error("simplex: mutation probabilities must be >= 0");
      rs += v;
    }
    if (std::abs(rs - 1.0) > 1e-12) throw Error("simplex: mutation matrix rows must sum to 1");
  }
  if (!(mu >= 0.0)) throw Error("simplex: mu must be >= 0");
}

namespace {

std::vector<double> simplex_rhs(const SimplexState& s, const std::vector<double>& x) {
  const std::size_t n = x.size();
  const auto f = s.payoff_kernel(x);
  if (f.size() != n) throw Error("simplex: kernel returned the wrong number of fitness values");
  // Mean fitness normalised by the total mass: identical on the simplex, and
  // it keeps round-off in the sum from being amplified when fitness < 0.
  double mean = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean += x[j] * f[j];
    mass += x[j];
  }
  mean /= mass;
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = x[j] * f[j];
    for (std::size_t i = 0; i < n; ++i) out[i] += w * s.mutation_matrix[j][i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] -= x[i] * mean + s.mu * (static_cast<double>(n) * x[i] - 1.0);
  return out;
}

std::vector<double> axpy(const std::vector<double>& x, double h, const std::vector<double>& k) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * k[i];
  return out;
}

}  // namespace

SimplexTrajectory integrate_simplex(const SimplexState& state, double t_end, double dt, std::size_t stride) {
  check_time_args(t_end, dt, stride);
  state.validate();

  const std::size_t steps = step_count(t_end, dt);
  SimplexTrajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(state.frequencies);
  auto x = state.frequencies;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_end - (n - 1) * dt);
    const auto k1 = simplex_rhs(state, x);
    const auto k2 = simplex_rhs(state, axpy(x, 0.5 * h, k1));
    const auto k3 = simplex_rhs(state, axpy(x, 0.5 * h, k2));
    const auto k4 = simplex_rhs(state, axpy(x, h, k3));
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (x[i] < -kExcursion) {
        std::ostringstream os;
        os.precision(17);
        os << "component " << i << " dropped to " << x[i] << " at t = " << n * dt;
        throw NegativeFrequency(os.str());
      }
      if (x[i] > 1.0 + kExcursion) throw StepTooLarge("simplex: component exceeded 1; reduce dt");
    }
    if (n % stride == 0 || n == steps) {
      tr.times.push_back(n == steps ? t_end : n * dt);
      tr.states.push_back(x);
    }
  }
  return tr;
}

PayoffKernel pgg_kernel(const GameParameters& p) {
  auto table = payoff_entries(p);
  return [table = std::move(table)](const std::vector<double>& x) {
    const auto f = average_fitness(x.at(0), table);
    return std::vector<double>{f.cooperator, f.defector};
  };
}

Matrix uniform_mutation_matrix(std::size_t n, double q) {
  Matrix m(n, std::vector<double>(n, n > 1 ? q / static_cast<double>(n - 1) : 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0 - q;
  return m;
}

}  // namespace pgg
