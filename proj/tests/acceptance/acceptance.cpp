// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "pgg/analysis.hpp"
#include "pgg/asymptotics.hpp"
#include "pgg/bifurcation.hpp"
#include "pgg/core_model.hpp"
#include "pgg/dynamics.hpp"
#include "pgg/equilibria.hpp"
#include "pgg/montecarlo.hpp"
#include "pgg/parallel.hpp"

using namespace pgg;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GameParameters make(int d, double b, double a, double delta, double r, double omega, double mu, double q, double c) {
  GameParameters p;
  p.d = d;
  p.b_lev = b;
  p.a_lev = a;
  p.delta = delta;
  p.r = r;
  p.omega = omega;
  p.mu = mu;
  p.q = q;
  p.c = c;
  return p;
}

GameParameters draw(std::uint64_t stream, std::uint64_t i, int d_min = 3, int d_max = 12) {
  SplitMix64 rng(mix_seed(stream, i));
  const int d = d_min + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d_max - d_min + 1));
  return sample_params(d, rng);
}

std::vector<Stability> expected_pattern(std::size_t n) {
  std::vector<Stability> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = ((n - 1 - i) % 2 == 0) ? Stability::Stable : Stability::Unstable;
  return out;
}

// Counts agree exactly and every root is within tolerance.
Outcome reference_sets() {
  const std::vector<GameParameters> sets = {
      make(7, 17.64, 6.18, 0.48, 1.16, 0.465, 0.415, 0.4505, 20),
      make(6, 0.0001, 15.32, 1, 5.57, 0.133, 0.643, 0.3335, 1),
      make(5, 7.08, 3.04, 16.4, 3.8, 0.133, 0.195, 0.171, 212),
      make(6, 0.2, 1.1, 18.68, 1.18, 0.039, 0.614, 0.08, 11.38),
      make(11, 3.66, 6.04, 16.4, 1.05, 0.133, 0.643, 0.195, 174),
  };
  Outcome o;
  Clock clock;
  std::string counts;
  double worst = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto set = find_equilibria(sets[k]);
    counts += (k ? "," : "") + std::to_string(set.size());
    if (set.size() != k) o.pass = false;
    for (const auto& e : set.roots) worst = std::max(worst, e.residual / set.scale);
  }
  const double t = clock.seconds();
  if (worst > 1e-10 || t >= 1.0) o.pass = false;
  o.detail = fmt("counts (%s) want (0,1,2,3,4); max scaled residual %.2e; %.3f s", counts.c_str(), worst, t);
  return o;
}

struct CapStats {
  std::atomic<std::uint64_t> draws{0}, over_four{0}, simple_sets{0}, pattern_violations{0};
};

// Root-count cap and stability ordering share the same million draws.
void root_cap_sweep(CapStats& st) {
  const std::uint64_t per_d = 100000;
  for (int d = 3; d <= 12; ++d) {
    const std::uint64_t stream = mix_seed(kSeed, static_cast<std::uint64_t>(d));
    parallel_for(per_d, default_threads(), [&](std::uint64_t begin, std::uint64_t end, unsigned) {
      std::uint64_t over = 0, simple = 0, bad = 0;
      for (std::uint64_t i = begin; i < end; ++i) {
        SplitMix64 rng(mix_seed(stream, i));
        const auto p = sample_params(d, rng);
        try {
          const auto set = find_equilibria(p);
          if (set.all_simple()) {
            ++simple;
            if (set.pattern() != expected_pattern(set.size())) ++bad;
          }
        } catch (const MoreThanFourRoots&) {
          ++over;
        }
      }
      st.draws += end - begin;
      st.over_four += over;
      st.simple_sets += simple;
      st.pattern_violations += bad;
    });
  }
}

Outcome dual_path() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto p = draw(mix_seed(kSeed, 3), i);
    std::vector<double> g(1024), h(1024);
    double scale = 1.0;
    for (int k = 0; k < 1024; ++k) {
      const double x = k / 1023.0;
      g[k] = gain(x, p);
      h[k] = gain_via_payoffs(x, p);
      scale = std::max(scale, std::abs(g[k]));
    }
    for (int k = 0; k < 1024; ++k) worst = std::max(worst, std::abs(g[k] - h[k]) / scale);
  }
  o.pass = worst <= 1e-9;
  o.detail = fmt("max scaled discrepancy %.2e over 1000 draws x 1024 points (limit 1e-9)", worst);
  return o;
}

Outcome closed_form() {
  Outcome o;
  double worst = 0.0;
  int above_half = 0, companion_inside = 0, count_mismatch = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto p = draw(mix_seed(kSeed, 4), i);
    p.delta = 0.0;
    const auto q = quadratic_equilibria(p);
    const auto numeric = find_equilibria(p);
    if (q.set.size() != 1 || numeric.size() != 1) {
      ++count_mismatch;
      continue;
    }
    const double x1 = q.set.roots[0].x;
    worst = std::max(worst, std::abs(x1 - numeric.roots[0].x));
    if (!(x1 < 0.5)) ++above_half;
    if (!q.discarded || (*q.discarded >= 0.0 && *q.discarded <= 1.0)) ++companion_inside;
  }
  o.pass = worst <= 1e-10 && above_half == 0 && companion_inside == 0 && count_mismatch == 0;
  o.detail = fmt("max |x1 - numeric| %.2e (limit 1e-10); x1 >= 1/2: %d; companion in [0,1]: %d; count mismatches: %d",
                 worst, above_half, companion_inside, count_mismatch);
  return o;
}

// Largest stable root in (1/2, 1), or NaN.
double upper_stable(const GameParameters& p) {
  const auto set = find_equilibria(p);
  for (auto it = set.roots.rbegin(); it != set.roots.rend(); ++it)
    if (it->stability == Stability::Stable && it->x > 0.5 && it->x < 1.0) return it->x;
  return NAN;
}

bool has_lower_stable(const GameParameters& p) {
  for (const auto& e : find_equilibria(p).roots)
    if (e.stability == Stability::Stable && e.x > 0.0 && e.x < 0.5) return true;
  return false;
}

Outcome sufficient_incentive() {
  struct Tally {
    int reversed = 0;
    int tied = 0;
  };
  auto judge = [](Tally& t, double change, double sign) {
    if (sign * change > 1e-9)
      return;
    else if (sign * change < -1e-9)
      ++t.reversed;
    else
      ++t.tied;
  };

  int missing_upper = 0, missing_lower = 0;
  Tally delta_t, mu_t, q_t, omega_t;
  const double h = 1e-3;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto p = draw(mix_seed(kSeed, 6), i);
    p.delta = 1.01 * incentive_threshold(p);
    const double x = upper_stable(p);
    if (std::isnan(x)) {
      ++missing_upper;
    } else {
      auto up = p;
      up.delta *= 1 + h;
      judge(delta_t, upper_stable(up) - x, +1);
      up = p;
      up.mu *= 1 + h;
      judge(mu_t, upper_stable(up) - x, -1);
      up = p;
      up.q *= 1 + h;
      judge(q_t, upper_stable(up) - x, -1);
    }

    // Same leverage for reward and punishment: more reward share, lower x*.
    auto s = p;
    s.b_lev = s.a_lev;
    double budget = 0.0;
    for (double w : {0.25, 0.5, 0.75}) {
      s.omega = w;
      budget = std::max(budget, incentive_threshold(s));
    }
    s.delta = 1.01 * budget;
    s.omega = 0.75;
    const double reward = upper_stable(s);
    s.omega = 0.5;
    const double mixed = upper_stable(s);
    s.omega = 0.25;
    const double punish = upper_stable(s);
    if (std::isnan(reward) || std::isnan(mixed) || std::isnan(punish)) {
      ++missing_upper;
    } else {
      judge(omega_t, mixed - reward, +1);
      judge(omega_t, punish - mixed, +1);
    }

    auto small = p;
    small.delta = 0.99 * small_incentive_threshold(small);
    if (!has_lower_stable(small)) ++missing_lower;
  }
  Outcome o;
  o.pass = missing_upper == 0 && missing_lower == 0 && delta_t.reversed + delta_t.tied == 0 &&
           mu_t.reversed + mu_t.tied == 0 && q_t.reversed + q_t.tied == 0 && omega_t.reversed + omega_t.tied == 0;
  o.detail = fmt(
      "no stable root in (1/2,1): %d; none in (0,1/2): %d; reversed/tied (|dx| <= 1e-9): delta %d/%d, mu %d/%d, "
      "q %d/%d, omega order %d/%d",
      missing_upper, missing_lower, delta_t.reversed, delta_t.tied, mu_t.reversed, mu_t.tied, q_t.reversed, q_t.tied,
      omega_t.reversed, omega_t.tied);
  return o;
}

std::string join(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

Outcome census() {
  Outcome o;
  int failed = 0;
  std::string bad;
  for (const auto& kase : all_census_cases()) {
    const auto rep = census_check(kase, 10000, mix_seed(kSeed, 7));
    if (!rep.pass) {
      ++failed;
      bad += " " + rep.case_name + " saw " + join(rep.observed()) + " allowed " + join(rep.allowed) + ";";
    }
  }
  o.pass = failed == 0;
  o.detail = fmt("%d of 19 cells outside the table at 1e4 draws each", failed) + (bad.empty() ? "" : ":" + bad);
  return o;
}

Outcome one_or_two_predictor() {
  int contradictions = 0, ones = 0, twos = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto p = draw(mix_seed(kSeed, 8), i);
    const auto pred = one_or_two(p);
    if (pred == RootCountPrediction::Inconclusive) continue;
    const auto n = find_equilibria(p).size();
    if (pred == RootCountPrediction::One) {
      ++ones;
      contradictions += n != 1;
    } else {
      ++twos;
      contradictions += n != 2;
    }
  }
  int below_half = 0;
  double lowest = INFINITY;
  for (int d = 5; d <= 20; ++d)
    for (int k = 1; k <= 1001; ++k) {
      const double q2 = tangency_q_branches(k / 1002.0, d).q2;
      lowest = std::min(lowest, q2);
      below_half += !(q2 > 0.5);
    }
  double worst_half = 0.0;
  for (int d = 5; d <= 20; ++d)
    worst_half = std::max(worst_half, std::abs(tangency_q_branches(0.5, d).q2 - (d + 1.0) / (2.0 * (d - 1.0))));

  Outcome o;
  o.pass = contradictions == 0 && below_half == 0 && worst_half <= 1e-12;
  o.detail = fmt(
      "contradictions %d (One %d, Two %d of 1e4); q2 <= 1/2 at %d of %d grid points (min %.4f); |q2(1/2) - "
      "(d+1)/(2(d-1))| max %.1e",
      contradictions, ones, twos, below_half, 16 * 1001, lowest, worst_half);
  return o;
}

int count_at(GameParameters p, double mu) {
  p.mu = mu;
  return static_cast<int>(find_equilibria(p).size());
}

Outcome bifurcation() {
  int mismatches = 0, over_cap = 0, bad_crossings = 0, bad_nodes = 0, nodes = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = draw(mix_seed(kSeed, 9), i);
    const auto diag = build_diagram(p);
    for (int k = 0; k < 64; ++k) {
      const double mu0 = (k + 0.5) / 64.0;
      mismatches += diag.intersection_count(mu0) != count_at(p, mu0);
    }
    SplitMix64 rng(mix_seed(kSeed + 9, i));
    for (int k = 0; k < 256; ++k) over_cap += diag.intersection_count(rng.uniform(-2.0, 2.0)) > 4;
    const int ac = diag.signature.axis_crossings;
    bad_crossings += !(ac == 0 || ac == 2 || ac == 4);
    for (const auto& node : saddle_nodes(p)) {
      double eps = 1e-4 * std::max(1.0, std::abs(node.mu));
      for (const auto* list : {&diag.left_nodes, &diag.right_nodes})
        for (const auto& other : *list)
          if (other.x != node.x) eps = std::min(eps, 0.5 * std::abs(other.mu - node.mu));
      ++nodes;
      bad_nodes += std::abs(count_at(p, node.mu - eps) - count_at(p, node.mu + eps)) != 2;
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && over_cap == 0 && bad_crossings == 0 && bad_nodes == 0;
  o.detail = fmt(
      "count mismatches %d of 6400; lines over 4 %d of 25600; crossings outside {0,2,4} %d; saddle nodes not "
      "changing by 2: %d of %d",
      mismatches, over_cap, bad_crossings, bad_nodes, nodes);
  return o;
}

// Non-negative payoffs: with negative fitness the flow can leave the simplex.
SimplexState random_simplex(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t n = 2 + rng.next() % 7;
  std::vector<std::vector<double>> payoff(n, std::vector<double>(n));
  for (auto& row : payoff)
    for (auto& v : row) v = rng.uniform(0.0, 3.0);
  SimplexState s;
  s.frequencies.resize(n);
  double total = 0.0;
  for (auto& v : s.frequencies) total += (v = rng.uniform());
  for (auto& v : s.frequencies) v /= total;
  s.mutation_matrix.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (auto& v : s.mutation_matrix[i]) rs += (v = rng.uniform() * 0.05);
    s.mutation_matrix[i][i] += 1.0;
    for (auto& v : s.mutation_matrix[i]) v /= rs + 1.0;
  }
  s.mu = rng.uniform(0.0, 0.1);
  s.payoff_kernel = [payoff](const std::vector<double>& x) {
    std::vector<double> f(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) f[i] += payoff[i][j] * x[j];
    return f;
  };
  return s;
}

Outcome dynamics() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto tr = integrate_simplex(random_simplex(mix_seed(kSeed, 100 + i)), 100.0, 1e-2, 10);
    for (const auto& st : tr.states) {
      double s = 0.0;
      for (double v : st) s += v;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }

  // One start per basin: midpoints between consecutive equilibria and the ends.
  // A basin with no stable root on its downhill side is predicted to run into
  // the boundary; the trajectory must move monotonically there.
  int basins = 0, converged = 0;
  std::string misses;
  const std::vector<std::pair<const char*, GameParameters>> systems = {
      {"printed", make(11, 3.66, 6.04, 16.4, 1.05, 0.133, 0.643, 0.195, 174)},
      {"q=0.0195", make(11, 3.66, 6.04, 16.4, 1.05, 0.133, 0.643, 0.0195, 174)},
  };
  for (const auto& [label, p] : systems) {
    const auto roots = find_equilibria(p).roots;
    std::vector<double> edges{0.0};
    for (const auto& e : roots) edges.push_back(e.x);
    edges.push_back(1.0);
    double slowest = INFINITY;
    for (const auto& e : roots) slowest = std::min(slowest, std::abs(e.slope));
    const double t_end = 100.0 / slowest;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double x0 = 0.5 * (edges[k] + edges[k + 1]);
      ++basins;
      const bool up = gain(x0, p) > 0;
      const double target = up ? edges[k + 1] : edges[k];
      const bool boundary = (up ? k + 2 == edges.size() : k == 0);
      const bool target_stable = std::any_of(roots.begin(), roots.end(), [&](const Equilibrium& e) {
        return e.x == target && e.stability == Stability::Stable;
      });
      bool ok = false;
      try {
        const auto states = integrate_scalar(x0, p, t_end, 1e-3, 1000).states;
        ok = std::abs(states.back() - target) <= 1e-6 && (target_stable || boundary);
      } catch (const StepTooLarge&) {
        // Only acceptable when heading for an end that is not an equilibrium.
        ok = boundary && !target_stable;
        if (ok) {
          double last = x0;
          for (int n = 1; n <= 200 && ok; ++n) {
            try {
              const double x = integrate_scalar(x0, p, n * 1e-3, 1e-3).states.back();
              ok = up ? x >= last : x <= last;
              last = x;
            } catch (const StepTooLarge&) {
              break;
            }
          }
        }
      }
      if (ok)
        ++converged;
      else
        misses += fmt(" %s x0=%.4f", label, x0);
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9 && converged == basins;
  o.detail = fmt("max |sum - 1| %.1e over 100 instances (limit 1e-9); %d of %d basins reach the predicted end", worst,
                 converged, basins) +
             (misses.empty() ? "" : "; missed:" + misses);
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  double weakest = 1.0;
  int weak_d = 0;
  bool identical = true;
  for (int d = 3; d <= 12; ++d) {
    const auto seed = mix_seed(kSeed, 11 + static_cast<std::uint64_t>(d));
    SampleOptions one;
    one.threads = 1;
    const auto h = sample_counts(d, 10000, seed);
    identical = identical && h == sample_counts(d, 10000, seed, one);
    const double share = h.fraction(1) + h.fraction(2);
    if (share < weakest) {
      weakest = share;
      weak_d = d;
    }
    if (!(share > 0.5)) o.pass = false;
  }
  if (!identical) o.pass = false;
  o.detail = fmt("smallest share of 1 or 2 roots %.4f at d=%d (need > 0.5); reruns identical: %s", weakest, weak_d,
                 identical ? "yes" : "no");
  return o;
}

Outcome asymptotics() {
  auto ref = make(10000, 1, 1, 0, 5, 0.5, 0.5, 0.25, 10);
  const double rel = std::abs(no_incentive_root(ref) - no_incentive_limit(ref)) / no_incentive_limit(ref);

  double worst_gap = 0.0;
  int not_decreasing = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto p = draw(mix_seed(kSeed, 13), i);
    double last = INFINITY;
    for (int d : {50, 100, 500, 2000}) {
      p.d = d;
      const double gap = limit_gap(p);
      not_decreasing += !(gap < last);
      last = gap;
    }
    worst_gap = std::max(worst_gap, last);
  }

  int compared = 0, count_mismatch = 0, finite_more = 0;
  for (std::uint64_t i = 0; i < 2000 && compared < 100; ++i) {
    auto p = draw(mix_seed(kSeed, 14), i);
    p.d = 2000;
    const auto roots = limit_roots(limit_model(p));
    bool separated = !roots.empty();
    for (std::size_t k = 0; k < roots.size(); ++k) {
      separated = separated && roots[k].x >= 0.05 && roots[k].x <= 0.95;
      if (k > 0) separated = separated && roots[k].x - roots[k - 1].x >= 0.05;
    }
    if (!separated) continue;
    ++compared;
    const auto finite = find_equilibria(p).size();
    count_mismatch += finite != roots.size();
    finite_more += finite > roots.size();
  }

  Outcome o;
  o.pass = rel <= 1e-3 && worst_gap < 1e-6 && not_decreasing == 0 && count_mismatch == 0;
  o.detail = fmt(
      "x1 relative error at d=1e4 %.1e (limit 1e-3); max gap on [0.2,0.8] at d=2000 %.1e (limit 1e-6), "
      "non-decreasing ladders %d; root count mismatches %d of %d (%d with extra finite-d roots)",
      rel, worst_gap, not_decreasing, count_mismatch, compared, finite_more);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const Outcome& o, double secs) {
    std::printf("%s %s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto timed = [&](const char* id, const char* name, auto fn) {
    Clock c;
    const Outcome o = fn();
    report(id, name, o, c.seconds());
  };

  timed("C1", "reference parameter sets", reference_sets);

  Clock cap_clock;
  CapStats cap;
  root_cap_sweep(cap);
  const double cap_secs = cap_clock.seconds();
  Outcome c2;
  c2.pass = cap.over_four == 0 && cap.draws == 1000000;
  c2.detail = fmt("%llu draws, %llu with more than four roots after refinement",
                  static_cast<unsigned long long>(cap.draws.load()), static_cast<unsigned long long>(cap.over_four.load()));
  report("C2", "four-root cap", c2, cap_secs);

  timed("C3", "dual-path algebra", dual_path);
  timed("C4", "closed-form agreement", closed_form);

  Outcome c5;
  c5.pass = cap.pattern_violations == 0;
  c5.detail = fmt("%llu pattern exceptions among %llu all-simple sets",
                  static_cast<unsigned long long>(cap.pattern_violations.load()),
                  static_cast<unsigned long long>(cap.simple_sets.load()));
  report("C5", "stability ordering", c5, 0.0);

  timed("C6", "sufficient incentive", sufficient_incentive);
  timed("C7", "census table", census);
  timed("C8", "one-or-two predictor", one_or_two_predictor);
  timed("C9", "bifurcation consistency", bifurcation);
  timed("C10", "dynamics invariance", dynamics);
  timed("C11", "monte carlo", monte_carlo);
  timed("C12", "asymptotics", asymptotics);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
