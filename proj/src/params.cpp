#include "pgg/params.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace pgg {

namespace {

std::string fmt_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require(bool ok, const char* field, const char* range, double got) {
  if (!ok)
    throw InvalidParameter(field, std::string("must satisfy ") + range + " (got " + fmt_value(got) + ")");
}

}  // namespace

void validate(const GameParameters& p, Validation mode) {
  const bool census = mode == Validation::Census;
  const double values[] = {p.r, p.c, p.q, p.mu, p.delta, p.a_lev, p.b_lev, p.omega};
  const char* names[] = {"r", "c", "q", "mu", "delta", "a", "b", "omega"};
  for (int i = 0; i < 8; ++i)
    if (!std::isfinite(values[i])) throw InvalidParameter(names[i], "must be finite");

  if (p.d < 3) throw InvalidParameter("d", "must be an integer >= 3 (got " + std::to_string(p.d) + ")");
  require(p.r > 1.0 && p.r < p.d, "r", "1 < r < d", p.r);
  require(p.c > 0.0, "c", "c > 0", p.c);
  if (census) {
    require(p.q >= 0.0 && p.q <= 0.5, "q", "0 <= q <= 1/2", p.q);
    require(p.mu >= 0.0 && p.mu <= 1.0, "mu", "0 <= mu <= 1", p.mu);
    require(p.delta >= 0.0, "delta", "delta >= 0", p.delta);
  } else {
    require(p.q > 0.0 && p.q < 0.5, "q", "0 < q < 1/2", p.q);
    require(p.mu > 0.0 && p.mu < 1.0, "mu", "0 < mu < 1", p.mu);
    require(p.delta > 0.0, "delta", "delta > 0", p.delta);
  }
  require(p.a_lev > 0.0, "a", "a > 0", p.a_lev);
  require(p.b_lev > 0.0, "b", "b > 0", p.b_lev);
  if (census)
    require(p.omega >= 0.0 && p.omega <= 1.0, "omega", "0 <= omega <= 1", p.omega);
  else
    require(p.omega > 0.0 && p.omega < 1.0, "omega", "0 < omega < 1", p.omega);
}

GameParameters checked(GameParameters p, Validation mode) {
  validate(p, mode);
  return p;
}

bool is_valid(const GameParameters& p, Validation mode) noexcept {
  try {
    validate(p, mode);
    return true;
  } catch (const InvalidParameter&) {
    return false;
  }
}

std::string describe(const GameParameters& p) {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << p.d << " r=" << p.r << " c=" << p.c << " q=" << p.q << " mu=" << p.mu
     << " delta=" << p.delta << " a=" << p.a_lev << " b=" << p.b_lev << " omega=" << p.omega;
  return os.str();
}

}  // namespace pgg
