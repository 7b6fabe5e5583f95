#include "pgg/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "pgg/core_model.hpp"
#include "pgg/parallel.hpp"

namespace pgg {

namespace {

constexpr int kConstraintCount = 6;

// Allowed root counts as bit sets (bit k = k roots); 0 marks an incompatible
// pair. Order: delta=0, omega=0, omega=1, mu=0, mu=1, q=0.
constexpr unsigned bits(std::initializer_list<int> ks) {
  unsigned m = 0;
  for (int k : ks) m |= 1u << k;
  return m;
}

constexpr unsigned kTable[kConstraintCount][kConstraintCount] = {
    {bits({1}), bits({1}), bits({1}), bits({1, 2}), bits({1, 2}), bits({2})},
    {bits({1}), bits({0, 1, 2, 3}), 0, bits({0, 2}), bits({0, 2}), bits({1, 3})},
    {bits({1}), 0, bits({1}), bits({1}), bits({1}), bits({1})},
    {bits({1, 2}), bits({0, 2}), bits({1}), bits({0, 2, 4}), 0, bits({2, 4})},
    {bits({1, 2}), bits({0, 2}), bits({1}), 0, bits({0, 1, 2, 3, 4}), bits({1, 3})},
    {bits({2}), bits({1, 3}), bits({1}), bits({2, 4}), bits({1, 3}), bits({1, 3})},
};

constexpr std::string_view kNames[kConstraintCount] = {"delta0", "omega0", "omega1", "mu0", "mu1", "q0"};

int index_of(Constraint c) { return static_cast<int>(c); }

}  // namespace

std::string_view to_string(Constraint c) { return kNames[index_of(c)]; }

CensusCase CensusCase::make(std::vector<Constraint> constraints) {
  if (constraints.empty() || constraints.size() > 2)
    throw IncompatibleConstraints("a census case pins one or two boundary values");
  std::sort(constraints.begin(), constraints.end());
  const int i = index_of(constraints.front());
  const int j = index_of(constraints.back());
  if (constraints.size() == 2 && i == j) throw IncompatibleConstraints("repeated constraint " + std::string(kNames[i]));
  const unsigned mask = kTable[i][j];
  if (mask == 0)
    throw IncompatibleConstraints(std::string(kNames[i]) + " and " + std::string(kNames[j]) + " cannot hold together");
  CensusCase out;
  out.constraints_ = std::move(constraints);
  for (int k = 0; k <= 4; ++k)
    if (mask & (1u << k)) out.allowed_.push_back(k);
  return out;
}

CensusCase CensusCase::parse(std::string_view name) {
  std::vector<Constraint> cs;
  std::size_t start = 0;
  while (start <= name.size()) {
    const std::size_t end = std::min(name.find('+', start), name.size());
    const auto part = name.substr(start, end - start);
    const auto it = std::find(std::begin(kNames), std::end(kNames), part);
    if (it == std::end(kNames))
      throw InvalidParameter("case", "unknown constraint '" + std::string(part) +
                                         "' (expected delta0, omega0, omega1, mu0, mu1 or q0, joined by '+')");
    cs.push_back(static_cast<Constraint>(it - std::begin(kNames)));
    start = end + 1;
  }
  return make(std::move(cs));
}

bool CensusCase::allows(int count) const { return std::find(allowed_.begin(), allowed_.end(), count) != allowed_.end(); }

bool CensusCase::has(Constraint c) const {
  return std::find(constraints_.begin(), constraints_.end(), c) != constraints_.end();
}

std::string CensusCase::name() const {
  std::string out;
  for (auto c : constraints_) {
    if (!out.empty()) out += '+';
    out += to_string(c);
  }
  return out;
}

GameParameters CensusCase::apply(GameParameters p) const {
  for (auto c : constraints_) {
    switch (c) {
      case Constraint::DeltaZero: p.delta = 0.0; break;
      case Constraint::OmegaZero: p.omega = 0.0; break;
      case Constraint::OmegaOne: p.omega = 1.0; break;
      case Constraint::MuZero: p.mu = 0.0; break;
      case Constraint::MuOne: p.mu = 1.0; break;
      case Constraint::QZero: p.q = 0.0; break;
    }
  }
  return p;
}

std::vector<CensusCase> all_census_cases() {
  std::vector<CensusCase> out;
  for (int i = 0; i < kConstraintCount; ++i)
    for (int j = i; j < kConstraintCount; ++j) {
      if (kTable[i][j] == 0) continue;
      if (i == j)
        out.push_back(CensusCase::make({static_cast<Constraint>(i)}));
      else
        out.push_back(CensusCase::make({static_cast<Constraint>(i), static_cast<Constraint>(j)}));
    }
  return out;
}

std::vector<int> CensusReport::observed() const {
  std::vector<int> out;
  for (int k = 0; k <= 4; ++k)
    if (counts[static_cast<std::size_t>(k)] > 0) out.push_back(k);
  return out;
}

CensusReport census_check(const CensusCase& kase, std::uint64_t samples, std::uint64_t seed,
                          const CensusOptions& opts) {
  if (opts.d_min < 3 || opts.d_max < opts.d_min) throw InvalidParameter("d-min", "need 3 <= d-min <= d-max");
  const auto span = static_cast<std::uint64_t>(opts.d_max - opts.d_min + 1);
  const bool carve_out = kase.has(Constraint::OmegaOne);

  const unsigned shards = opts.threads == 0 ? default_threads() : opts.threads;
  std::vector<CensusReport> parts(shards);
  parallel_for(samples, shards, [&](std::uint64_t begin, std::uint64_t end, unsigned s) {
    auto& part = parts[s];
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 rng(mix_seed(seed, i));
      const int d = opts.d_min + static_cast<int>(rng.next() % span);
      const auto p = kase.apply(sample_params(d, rng, opts.ranges, opts.ab));
      validate(p, Validation::Census);
      if (carve_out && std::abs(p.mu - p.b_lev * p.q * p.delta) <= opts.carve_out_band) {
        ++part.skipped;
        continue;
      }
      const auto set = find_equilibria(p, opts.finder);
      ++part.counts[set.size()];
      ++part.draws;
    }
  });

  CensusReport report;
  report.case_name = kase.name();
  report.allowed = kase.allowed_counts();
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < report.counts.size(); ++k) report.counts[k] += part.counts[k];
    report.draws += part.draws;
    report.skipped += part.skipped;
  }
  const auto seen = report.observed();
  report.pass = std::all_of(seen.begin(), seen.end(), [&](int k) { return kase.allows(k); });
  return report;
}

bool baseline_upturned(const GameParameters& p) {
  const double d = p.d;
  return p.c * (2.0 * (d - 1.0) * p.q * p.r - d + p.r) / d > 0.0;
}

bool incentive_part_concave(const GameParameters& p, int grid) {
  const int n = std::max(grid, 2);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    if (!(incentive_part_derivative(x, p, 2) < 0.0)) return false;
  }
  return true;
}

std::string_view to_string(RootCountPrediction r) {
  switch (r) {
    case RootCountPrediction::One: return "One";
    case RootCountPrediction::Two: return "Two";
    case RootCountPrediction::Inconclusive: return "Inconclusive";
  }
  return "?";
}

RootCountPrediction one_or_two(const GameParameters& p, const RootFinderConfig& cfg) {
  if (!baseline_upturned(p) || !incentive_part_concave(p)) return RootCountPrediction::Inconclusive;
  const double g0 = gain(0.0, p);
  if (g0 > 0.0) return RootCountPrediction::One;
  if (g0 == 0.0) return RootCountPrediction::Inconclusive;

  // G is concave and negative at both ends: two roots iff its maximum is
  // clearly positive.
  double lo = 0.0;
  double hi = 1.0;
  double xmax;
  if (gain_derivative(0.0, p, 1) <= 0.0) {
    xmax = 0.0;
  } else if (gain_derivative(1.0, p, 1) >= 0.0) {
    xmax = 1.0;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (gain_derivative(mid, p, 1) > 0.0 ? lo : hi) = mid;
    }
    xmax = 0.5 * (lo + hi);
  }
  const double scale = gain_scale(p, cfg.effective_grid(p.d));
  return gain(xmax, p) > cfg.tangency_tol * scale ? RootCountPrediction::Two : RootCountPrediction::Inconclusive;
}

namespace {

void require_tangency_d(int d) {
  if (d < 5) throw InvalidParameter("d", "tangency locus needs d >= 5 (got " + std::to_string(d) + ")");
}

double tangency_root(double x, double d) {
  const double s = 1.0 - 2.0 * x;
  const double w = x * x - x;
  return std::sqrt(d * s * s * (d - 4.0) + 4.0 * w * (w + 4.0) + 4.0);
}

}  // namespace

TangencyBranches tangency_q_branches(double x, int d) {
  require_tangency_d(d);
  const double dd = d;
  const double root = tangency_root(x, dd);
  const double base = dd - 2.0 - 2.0 * x * (x - 1.0);
  const double denom = 2.0 * (dd - 2.0) * (dd - 1.0);
  return {(dd + 1.0) * (base + root) / denom, (dd + 1.0) * (base - root) / denom};
}

TangencyPoint tangency_locus(double x, int d) {
  require_tangency_d(d);
  if (!(x > 0.0 && x < 1.0)) throw InvalidParameter("x", "tangency locus needs 0 < x < 1");
  if (std::abs(x - 0.5) < 1e-9) throw SingularAtHalf("tangency locus is singular at x = 1/2");
  const double dd = d;
  const double cube = 2.0 * std::pow(x - 1.0, 3) * unit_power(x, d);
  const double other = x * complement_power(x, d) * (tangency_root(x, dd) + (dd - 2.0) * (2.0 * x - 1.0));
  return {x, tangency_q_branches(x, d).q1, cube / (other + cube)};
}

double tangency_omega(double x, int d, double q) {
  const double dd = d;
  const double right = unit_power(x, d - 2) * ((dd + 1.0) * x - (dd - 1.0) * q);
  const double left = complement_power(x, d - 2) * ((dd + 1.0) * (1.0 - x) - (dd - 1.0) * q);
  return right / (right - left);
}

std::array<double, 2> tangency_residuals(double x, int d, double q, double omega) {
  const double dd = d;
  auto relative = [](double u, double v) {
    const double m = std::max(std::abs(u), std::abs(v));
    return m == 0.0 ? 0.0 : std::abs(u - v) / m;
  };
  const double u1 = (1.0 - omega) * unit_power(x, d - 2) * (-dd * q + dd * x + q + x);
  const double v1 = omega * complement_power(x, d - 2) * (dd * (q + x - 1.0) - q + x - 1.0);
  const double u2 = (omega - 1.0) * unit_power(x, d - 3) * (-dd * q + dd * x + 2.0 * q + x);
  const double v2 = omega * complement_power(x, d - 3) * (dd * (q + x - 1.0) - 2.0 * q + x - 1.0);
  return {relative(u1, v1), relative(u2, v2)};
}

ConcavitySensitivity concavity_sensitivities(double x, const GameParameters& p) {
  const double d = p.d;
  const double right = unit_power(x, p.d - 2);
  const double left = complement_power(x, p.d - 2);
  ConcavitySensitivity s;
  s.d_dq = d * p.delta * (d - 1.0) * (p.b_lev * (1.0 - p.omega) * right + p.a_lev * p.omega * left);
  s.d_domega = d * p.delta *
               (p.b_lev * right * ((d + 1.0) * x - (d - 1.0) * p.q) -
                p.a_lev * left * ((d + 1.0) * (1.0 - x) - (d - 1.0) * p.q));
  return s;
}

}  // namespace pgg
