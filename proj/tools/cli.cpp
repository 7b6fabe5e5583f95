#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "pgg/analysis.hpp"
#include "pgg/asymptotics.hpp"
#include "pgg/bifurcation.hpp"
#include "pgg/dynamics.hpp"
#include "pgg/equilibria.hpp"
#include "pgg/montecarlo.hpp"

#ifndef PGGLAB_VERSION
#define PGGLAB_VERSION "0.0.0"
#endif

namespace pgg::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return format_number(v);
        else if constexpr (std::is_same_v<T, long long>)
          return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return v;
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell_text(row[i]);
    s += '\n';
  }
  return s;
}

json render_json(const Table& t, const json& meta) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  json doc = json::object();
  doc["columns"] = t.header;
  doc["rows"] = std::move(rows);
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

struct CommonOptions {
  GameParameters p{.d = 6, .r = 3.0, .c = 1.0, .q = 0.1, .mu = 0.1, .delta = 1.0};
  bool census = false;
  std::uint64_t seed = 42;
  std::uint64_t iters = 10000;
  int grid = 4096;
  double tol = 1e-13;
  std::string out = ".";
  std::string format = "csv";
  unsigned threads = 0;
};

struct SimulateOptions {
  double x0 = 0.5;
  double t_end = 100.0;
  double dt = 1e-3;
  std::size_t stride = 100;
  bool simplex = false;
};

struct CensusOptionsCli {
  std::string cases = "all";
  int d_min = 3;
  int d_max = 12;
};

// Everything one command produces; written out by finish().
struct Run {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> args;  // resolved flags, enough to replay the run
  std::vector<std::string> outputs;
};

class Session {
 public:
  Session(const CommonOptions& o, std::ostream& out) : o_(o), out_(out) {}

  void begin(Run& run, const std::string& command, bool game_params) {
    run.command = command;
    run.args.push_back(command);
    if (game_params) {
      const auto& p = o_.p;
      add(run, "d", static_cast<long long>(p.d));
      add(run, "r", p.r);
      add(run, "c", p.c);
      add(run, "q", p.q);
      add(run, "mu", p.mu);
      add(run, "delta", p.delta);
      add(run, "a", p.a_lev);
      add(run, "b", p.b_lev);
      add(run, "omega", p.omega);
      if (o_.census) {
        run.parameters["census"] = true;
        run.args.push_back("--census");
      }
    }
  }

  void add(Run& run, const std::string& key, const Cell& value) {
    run.parameters[key] = cell_json(value);
    run.args.push_back("--" + key);
    run.args.push_back(cell_text(value));
  }

  void emit(Run& run, const Table& table, const json& meta = json::object()) {
    const fs::path dir(o_.out);
    fs::create_directories(dir);
    const auto csv = render_csv(table);
    const auto doc = render_json(table, meta).dump(2) + "\n";
    write_file(dir / (table.name + ".csv"), csv);
    write_file(dir / (table.name + ".json"), doc);
    run.outputs.push_back(table.name + ".csv");
    run.outputs.push_back(table.name + ".json");
    out_ << (o_.format == "json" ? doc : csv);
  }

  void finish(const Run& run) {
    json m = json::object();
    m["command"] = run.command;
    m["version"] = std::string("pgglab ") + PGGLAB_VERSION;
    m["seed"] = o_.seed;
    m["parameters"] = run.parameters;
    m["args"] = run.args;
    m["outputs"] = run.outputs;
    write_file(fs::path(o_.out) / "manifest.json", m.dump(2) + "\n");
  }

  RootFinderConfig finder() const {
    RootFinderConfig cfg;
    cfg.grid_points = o_.grid;
    cfg.tol_x = o_.tol;
    cfg.validate();
    return cfg;
  }

  Validation mode() const { return o_.census ? Validation::Census : Validation::Strict; }

 private:
  const CommonOptions& o_;
  std::ostream& out_;
};

void add_common(Run& run, Session& s, const CommonOptions& o, bool seeded) {
  s.add(run, "grid", static_cast<long long>(o.grid));
  s.add(run, "tol", o.tol);
  if (seeded) {
    s.add(run, "seed", static_cast<long long>(o.seed));
    s.add(run, "iters", static_cast<long long>(o.iters));
  }
}

void cmd_equilibria(Session& s, const CommonOptions& o, bool closed_form) {
  Run run;
  s.begin(run, "equilibria", true);
  add_common(run, s, o, false);
  if (closed_form) {
    run.parameters["closed-form"] = true;
    run.args.push_back("--closed-form");
  }
  validate(o.p, s.mode());
  const auto set = closed_form ? quadratic_equilibria(o.p).set : find_equilibria(o.p, s.finder());

  Table t{"equilibria", {"x", "stability", "residual", "slope"}, {}};
  for (const auto& e : set.roots)
    t.rows.push_back({e.x, std::string(1, stability_code(e.stability)), e.residual, e.slope});
  json meta = json::object();
  meta["method"] = set.method == SolveMethod::ClosedForm ? "closed-form" : "grid-bisection";
  meta["scale"] = set.scale;
  s.emit(run, t, meta);
  s.finish(run);
}

void cmd_simulate(Session& s, const CommonOptions& o, const SimulateOptions& so) {
  Run run;
  s.begin(run, "simulate", true);
  s.add(run, "x0", so.x0);
  s.add(run, "t-end", so.t_end);
  s.add(run, "dt", so.dt);
  s.add(run, "stride", static_cast<long long>(so.stride));
  if (so.simplex) {
    run.parameters["simplex"] = true;
    run.args.push_back("--simplex");
  }
  validate(o.p, s.mode());

  Table t{"trajectory", {}, {}};
  if (so.simplex) {
    SimplexState st{{so.x0, 1.0 - so.x0}, pgg_kernel(o.p), uniform_mutation_matrix(2, o.p.q), o.p.mu};
    const auto tr = integrate_simplex(st, so.t_end, so.dt, so.stride);
    t.header = {"t", "x0", "x1"};
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      t.rows.push_back({tr.times[i], tr.states[i][0], tr.states[i][1]});
  } else {
    const auto tr = integrate_scalar(so.x0, o.p, so.t_end, so.dt, so.stride);
    t.header = {"t", "x"};
    for (std::size_t i = 0; i < tr.times.size(); ++i) t.rows.push_back({tr.times[i], tr.states[i]});
  }
  s.emit(run, t);
  s.finish(run);
}

void cmd_bifurcate(Session& s, const CommonOptions& o, double window) {
  Run run;
  s.begin(run, "bifurcate", true);
  s.add(run, "grid", static_cast<long long>(o.grid));
  s.add(run, "exclusion-window", window);
  validate(o.p, s.mode());
  const auto diag = build_diagram(o.p, o.grid, window);

  struct Point {
    double x, mu;
    Side side;
    bool critical;
  };
  std::vector<Point> pts;
  for (const auto& smp : diag.samples) pts.push_back({smp.x, smp.mu_value, smp.side, false});
  for (const auto& cp : diag.critical_points)
    pts.push_back({cp.x, cp.mu, cp.x < 0.5 ? Side::LeftOfHalf : Side::RightOfHalf, true});
  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });

  Table t{"bifurcation", {"x", "mu", "side", "is_critical"}, {}};
  for (const auto& pt : pts) t.rows.push_back({pt.x, pt.mu, std::string(to_string(pt.side)), pt.critical});
  const auto& sig = diag.signature;
  json meta = json::object();
  meta["signature"] = {{"left_criticals", sig.left_criticals},
                       {"right_criticals", sig.right_criticals},
                       {"sign_at_0", sig.sign_at_0},
                       {"sign_at_1", sig.sign_at_1},
                       {"axis_crossings", sig.axis_crossings}};
  s.emit(run, t, meta);
  s.finish(run);
}

void cmd_sample(Session& s, const CommonOptions& o) {
  Run run;
  s.begin(run, "sample", false);
  s.add(run, "d", static_cast<long long>(o.p.d));
  add_common(run, s, o, true);
  SampleOptions opts;
  opts.finder = s.finder();
  opts.threads = o.threads;
  const auto h = sample_counts(o.p.d, o.iters, o.seed, opts);

  Table t{"histogram", {"root_count", "frequency"}, {}};
  for (int k = 0; k <= 4; ++k) t.rows.push_back({static_cast<long long>(k), static_cast<long long>(h.counts[k])});
  json meta = json::object();
  meta["d"] = h.d;
  meta["draws"] = h.draws;
  meta["seed"] = h.seed;
  meta["retried"] = h.retried;
  meta["generator"] = "splitmix64";
  s.emit(run, t, meta);
  s.finish(run);
}

std::vector<CensusCase> parse_cases(const std::string& list) {
  if (list == "all") return all_census_cases();
  std::vector<CensusCase> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(CensusCase::parse(item));
  if (out.empty()) throw InvalidParameter("case", "no census case given");
  return out;
}

void cmd_census(Session& s, const CommonOptions& o, const CensusOptionsCli& co, std::ostream& err) {
  Run run;
  s.begin(run, "census", false);
  s.add(run, "case", co.cases);
  s.add(run, "d-min", static_cast<long long>(co.d_min));
  s.add(run, "d-max", static_cast<long long>(co.d_max));
  add_common(run, s, o, true);

  CensusOptions opts;
  opts.d_min = co.d_min;
  opts.d_max = co.d_max;
  opts.finder = s.finder();
  opts.threads = o.threads;
  Table t{"census", {"case", "draw_count", "count0", "count1", "count2", "count3", "count4", "pass"}, {}};
  json allowed = json::object();
  for (const auto& kase : parse_cases(co.cases)) {
    const auto rep = census_check(kase, o.iters, o.seed, opts);
    std::vector<Cell> row{rep.case_name, static_cast<long long>(rep.draws)};
    for (auto c : rep.counts) row.push_back(static_cast<long long>(c));
    row.push_back(rep.pass);
    t.rows.push_back(std::move(row));
    allowed[rep.case_name] = rep.allowed;
    if (!rep.pass) err << "census: case " << rep.case_name << " produced root counts outside the table\n";
  }
  json meta = json::object();
  meta["allowed"] = allowed;
  s.emit(run, t, meta);
  s.finish(run);
}

void cmd_asymptote(Session& s, const CommonOptions& o, const std::vector<int>& ladder) {
  Run run;
  s.begin(run, "asymptote", true);
  add_common(run, s, o, false);
  std::string joined;
  for (int d : ladder) joined += (joined.empty() ? "" : ",") + std::to_string(d);
  s.add(run, "d-ladder", joined);

  const auto model = limit_model(o.p);
  const auto limit_count = static_cast<long long>(limit_roots(model).size());
  const double x1_limit = no_incentive_limit(o.p);
  Table t{"asymptote",
          {"d", "limit_gap", "x1", "x1_limit", "x1_relative_error", "root_count", "limit_root_count"},
          {}};
  for (int d : ladder) {
    auto p = o.p;
    p.d = d;
    validate(p, s.mode());
    const double x1 = no_incentive_root(p);
    const auto count = static_cast<long long>(find_equilibria(p, s.finder()).size());
    t.rows.push_back({static_cast<long long>(d), limit_gap(p), x1, x1_limit, std::abs(x1 - x1_limit) / x1_limit,
                      count, limit_count});
  }
  json meta = json::object();
  meta["g1"] = {model.g1_slope, model.g1_intercept};
  meta["g2"] = model.g2_coeffs;
  s.emit(run, t, meta);
  s.finish(run);
}

void add_game_flags(CLI::App& app, CommonOptions& o) {
  app.add_option("--d", o.p.d, "group size")->capture_default_str();
  app.add_option("--r", o.p.r, "multiplication factor")->capture_default_str();
  app.add_option("--c", o.p.c, "contribution cost")->capture_default_str();
  app.add_option("--q", o.p.q, "multiplicative mutation probability")->capture_default_str();
  app.add_option("--mu", o.p.mu, "additive mutation rate")->capture_default_str();
  app.add_option("--delta", o.p.delta, "per-capita incentive budget")->capture_default_str();
  app.add_option("--a", o.p.a_lev, "reward leverage")->capture_default_str();
  app.add_option("--b", o.p.b_lev, "punishment leverage")->capture_default_str();
  app.add_option("--omega", o.p.omega, "share of the budget spent on reward")->capture_default_str();
  app.add_flag("--census", o.census, "accept the boundary values q=0, mu in {0,1}, omega in {0,1}, delta=0");
}

int replay(const std::string& manifest, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream f(manifest);
  if (!f) {
    err << "error: cannot read manifest " << manifest << "\n";
    return kValidation;
  }
  json m;
  try {
    f >> m;
  } catch (const json::exception& e) {
    err << "error: malformed manifest: " << e.what() << "\n";
    return kValidation;
  }
  if (!m.contains("args") || !m["args"].is_array()) {
    err << "error: manifest has no args\n";
    return kValidation;
  }
  auto args = m["args"].get<std::vector<std::string>>();
  args.push_back("--out");
  args.push_back(out_dir.empty() ? fs::path(manifest).parent_path().string() : out_dir);
  if (args.back().empty()) args.back() = ".";
  return run_cli(args, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replicator-mutator dynamics of public goods games with institutional incentives", "pgglab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string("pgglab ") + PGGLAB_VERSION);
  app.fallthrough();
  app.require_subcommand(1);

  CommonOptions o;
  add_game_flags(app, o);
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--iters", o.iters, "number of random draws")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "grid points for root isolation and diagrams")->capture_default_str();
  app.add_option("--tol", o.tol, "root abscissa tolerance")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--format", o.format, "what to echo on stdout")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  bool closed_form = false;
  auto* eq = app.add_subcommand("equilibria", "equilibria and their stability");
  eq->add_flag("--closed-form", closed_form, "use the no-incentive closed form (requires --delta 0 --census)");

  SimulateOptions so;
  auto* sim = app.add_subcommand("simulate", "integrate the dynamics from one initial state");
  sim->add_option("--x0", so.x0, "initial cooperator frequency")->capture_default_str();
  sim->add_option("--t-end", so.t_end, "final time")->capture_default_str();
  sim->add_option("--dt", so.dt, "step size")->capture_default_str();
  sim->add_option("--stride", so.stride, "record every n-th step")->capture_default_str();
  sim->add_flag("--simplex", so.simplex, "integrate the two-strategy simplex system instead");

  double window = 1e-6;
  auto* bif = app.add_subcommand("bifurcate", "bifurcation diagram in mu");
  bif->add_option("--exclusion-window", window, "gap left around x = 1/2")->capture_default_str();

  auto* smp = app.add_subcommand("sample", "root-count histogram over random parameters");

  CensusOptionsCli co;
  auto* cen = app.add_subcommand("census", "root counts on the special-case table");
  cen->add_option("--case", co.cases, "cell such as q0 or mu0+q0, a comma-separated list, or all")
      ->capture_default_str();
  cen->add_option("--d-min", co.d_min, "smallest group size drawn")->capture_default_str();
  cen->add_option("--d-max", co.d_max, "largest group size drawn")->capture_default_str();

  std::vector<int> ladder{50, 100, 500, 2000};
  auto* asy = app.add_subcommand("asymptote", "large group size limits");
  asy->add_option("--d-ladder", ladder, "group sizes to evaluate")->delimiter(',')->capture_default_str();

  std::string manifest;
  auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  rep->add_option("manifest", manifest, "manifest.json of an earlier run")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  Session session(o, out);
  try {
    if (*eq) cmd_equilibria(session, o, closed_form);
    if (*sim) cmd_simulate(session, o, so);
    if (*bif) cmd_bifurcate(session, o, window);
    if (*smp) cmd_sample(session, o);
    if (*cen) cmd_census(session, o, co, err);
    if (*asy) cmd_asymptote(session, o, ladder);
    if (*rep) return replay(manifest, app.get_option("--out")->count() ? o.out : std::string(), out, err);
  } catch (const InvalidParameter& e) {
    err << "error: --" << e.field() << ": " << e.what() + e.field().size() + 2 << "\n";
    return kValidation;
  } catch (const IncompatibleConstraints& e) {
    err << "error: --case: " << e.what() << "\n";
    return kValidation;
  } catch (const MoreThanFourRoots& e) {
    err << "error: " << e.what() << "\n";
    return kTooManyRoots;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace pgg::cli
