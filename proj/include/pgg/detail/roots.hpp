#pragma once

// Real-root isolation on a closed interval for smooth scalar functions whose
// number of roots is small: grid scan, bisection, guarded Newton polish, and a
// local-extremum probe that recovers root pairs hidden inside one grid cell
// and near-tangencies.

#include <algorithm>
#include <cmath>
#include <vector>

namespace pgg::detail {

struct RootCandidate {
  double x = 0.0;
  bool tangency = false;  // located as an extremum of f, not as a sign change
};

struct IsolationSettings {
  int grid_points = 4096;
  double tol_x = 1e-13;
  /// |f| threshold, relative to max(1, max |f| on the grid), below which an
  /// extremum without a sign change is reported as a (double) root. Zero
  /// disables tangency reporting.
  double tangency_rel = 0.0;
  double merge_distance = 1e-8;
};

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Bisection on [lo, hi] with sign(f(lo)) != sign(f(hi)), then up to four
/// Newton steps that must stay inside the final bracket and reduce |f|.
template <class F, class DF>
double refine_bracket(const F& f, const DF& df, double lo, double hi, double flo, double tol_x) {
  for (int it = 0; it < 200 && hi - lo > tol_x; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  const double bracket_lo = lo - tol_x;
  const double bracket_hi = hi + tol_x;
  for (int it = 0; it < 4 && fx != 0.0; ++it) {
    const double slope = df(x);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = x - fx / slope;
    if (!(next >= bracket_lo && next <= bracket_hi)) break;
    const double fnext = f(next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

struct IsolationResult {
  std::vector<RootCandidate> roots;  // sorted, merged
  double scale = 1.0;                // max(1, max |f| on the grid)
};

/// All roots of f on [lo, hi]. `df` must be the derivative of f.
template <class F, class DF>
IsolationResult isolate_roots(const F& f, const DF& df, double lo, double hi,
                                         const IsolationSettings& s) {
  const int n = std::max(s.grid_points, 3);
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> vs(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? hi : lo + i * h;
    vs[i] = f(xs[i]);
  }
  double scale = 1.0;
  for (double v : vs) scale = std::max(scale, std::abs(v));
  const double tangency_abs = s.tangency_rel * scale;

  std::vector<RootCandidate> found;
  for (int i = 0; i < n; ++i)
    if (vs[i] == 0.0) found.push_back({xs[i], false});

  for (int i = 0; i + 1 < n; ++i)
    if (sign_of(vs[i]) * sign_of(vs[i + 1]) < 0)
      found.push_back({refine_bracket(f, df, xs[i], xs[i + 1], vs[i], s.tol_x), false});

  // Local minima of |f| with no sign change in the neighbourhood.
  for (int i = 0; i < n; ++i) {
    if (vs[i] == 0.0) continue;
    const int l = std::max(i - 1, 0);
    const int r = std::min(i + 1, n - 1);
    if (sign_of(vs[l]) != sign_of(vs[i]) || sign_of(vs[r]) != sign_of(vs[i])) continue;
    if (std::abs(vs[i]) > std::abs(vs[l]) || std::abs(vs[i]) > std::abs(vs[r])) continue;
    double glo = df(xs[l]);
    const double ghi = df(xs[r]);
    if (sign_of(glo) * sign_of(ghi) >= 0) {
      // Monotone across the window: the minimum sits on the boundary.
      if ((i == 0 || i == n - 1) && tangency_abs > 0.0 && std::abs(vs[i]) <= tangency_abs)
        found.push_back({xs[i], true});
      continue;
    }
    const double xc = refine_bracket(df, [&](double) { return 0.0; }, xs[l], xs[r], glo, s.tol_x);
    const double fc = f(xc);
    if (fc == 0.0) {
      found.push_back({xc, true});
    } else if (sign_of(fc) != sign_of(vs[i])) {
      found.push_back({refine_bracket(f, df, xs[l], xc, vs[l], s.tol_x), false});
      found.push_back({refine_bracket(f, df, xc, xs[r], fc, s.tol_x), false});
    } else if (tangency_abs > 0.0 && std::abs(fc) <= tangency_abs) {
      found.push_back({xc, true});
    }
  }

  for (auto& c : found) {
    if (c.x - lo <= s.tol_x) c.x = lo;
    if (hi - c.x <= s.tol_x) c.x = hi;
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

  std::vector<RootCandidate> merged;
  for (const auto& c : found) {
    if (!merged.empty() && c.x - merged.back().x < s.merge_distance) {
      auto& prev = merged.back();
      if (std::abs(f(c.x)) < std::abs(f(prev.x))) prev.x = c.x;
      prev.tangency = prev.tangency && c.tangency;
      continue;
    }
    merged.push_back(c);
  }
  return {std::move(merged), scale};
}

}  // namespace pgg::detail
