#include "tracenorm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/problems.hpp"
#include "tracenorm/schur_study.hpp"
#include "tracenorm/spectral.hpp"

#ifndef TRACENORM_VERSION
#define TRACENORM_VERSION "unknown"
#endif

namespace tracenorm {

namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<ReportCell>;

struct CellOutput {
  std::vector<Row> rows;
  std::vector<TimedEntry> setup;
};

using Task = std::function<CellOutput()>;

std::vector<CellOutput> run_tasks(const std::vector<Task>& tasks, int jobs) {
  std::vector<CellOutput> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error("expected a boolean, got '" + v + "'");
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw Error("expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw Error("expected a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& v) {
  std::size_t pos = 0;
  long long d = 0;
  try {
    d = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw Error("expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw Error("expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

std::vector<Element> elements_of(const ExperimentConfig& c) {
  if (c.element == "p1") return {Element::P1};
  if (c.element == "p0") return {Element::P0};
  if (c.element == "both") return {Element::P1, Element::P0};
  throw Error("element must be p1, p0 or both, got '" + c.element + "'");
}

std::string element_name(Element e) { return e == Element::P1 ? "p1" : "p0"; }

MinresOptions minres_options(const ExperimentConfig& c) {
  MinresOptions o;
  o.tolerance = c.tolerance;
  o.relative = c.relative;
  o.max_iterations = c.max_iterations;
  o.seed = c.seed;
  return o;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string label(const std::string& curve, const std::string& extra, int level) {
  return curve + (extra.empty() ? "" : "/" + extra) + "/level=" + std::to_string(level);
}

std::string format_s(double s) { return "s=" + format_double(s); }

DomainBlockOptions domain_options(const ExperimentConfig& c, int dim, int cells) {
  DomainBlockOptions o;
  if (c.inner == "multigrid") {
    int levels = 1;
    while ((cells >> levels) >= 4 && ((cells >> levels) << levels) == cells) ++levels;
    o.multigrid = std::make_shared<const GmgHierarchy>(uniform_hierarchy(dim, cells, levels));
  } else if (c.inner != "cholesky") {
    throw Error("inner solver for saddle systems must be cholesky or multigrid, got '" + c.inner + "'");
  }
  return o;
}

Row iteration_row(const std::string& experiment, const std::string& curve, const std::string& element, double s,
                  int level, int n, const SaddleSystem& sys, int iterations, std::uint64_t seed) {
  return {experiment,
          curve,
          element,
          s,
          static_cast<std::int64_t>(level),
          static_cast<std::int64_t>(n),
          static_cast<std::int64_t>(sys.dim_v),
          sys.dim_w ? ReportCell(static_cast<std::int64_t>(sys.dim_w)) : ReportCell(std::monostate{}),
          static_cast<std::int64_t>(sys.dim_q),
          static_cast<std::int64_t>(iterations),
          std::monostate{},
          std::monostate{},
          static_cast<std::int64_t>(seed)};
}

ExperimentResult collect(StudyReport report, const std::vector<CellOutput>& cells) {
  ExperimentResult r{std::move(report), {}};
  for (const auto& c : cells) {
    for (const auto& row : c.rows) r.report.add_row(row);
    r.setup.insert(r.setup.end(), c.setup.begin(), c.setup.end());
  }
  return r;
}

ExperimentResult run_spectral(const ExperimentConfig& c) {
  SpectralOptions opts;
  opts.with_mass = c.dirichlet_with_mass;
  opts.allow_large = c.allow_large;
  std::vector<Task> tasks;
  for (const auto& name : c.curves) {
    SpectralCurve curve;
    if (name == "gamma1")
      curve = SpectralCurve::Gamma1;
    else if (name == "gamma2")
      curve = SpectralCurve::Gamma2;
    else
      throw Error("spectral-cond supports gamma1 and gamma2, got '" + name + "'");
    for (double s : c.s_values)
      for (int n : c.n_values)
        tasks.push_back([=] {
          const auto t0 = Clock::now();
          const auto r = spectral_condition(curve, n, s, opts);
          CellOutput out;
          out.rows.push_back({name, s, static_cast<std::int64_t>(n), r.lambda_min, r.lambda_max, r.kappa});
          out.setup.push_back({name + "/" + format_s(s) + "/n=" + std::to_string(n), elapsed(t0)});
          return out;
        });
  }
  return collect(StudyReport("spectral-cond", {"curve", "s", "n", "lambda_min", "lambda_max", "kappa"}),
                 run_tasks(tasks, c.jobs));
}

ExperimentResult run_fem_cond(const ExperimentConfig& c) {
  InnerSolverOptions inner;
  if (c.inner == "cg")
    inner.solver = InnerSolver::Cg;
  else if (c.inner != "cholesky")
    throw Error("fem-cond inner solver must be cholesky or cg, got '" + c.inner + "'");
  std::vector<Task> tasks;
  for (const auto& name : c.curves) {
    const CurveKind kind = curve_kind_from_string(name);
    for (int level : c.levels)
      tasks.push_back([=] {
        SchurStudyConfig sc;
        sc.curve = kind;
        sc.levels = {level};
        sc.s_values = c.s_values;
        sc.inner = inner;
        sc.dirichlet_with_mass = c.dirichlet_with_mass;
        const auto t0 = Clock::now();
        const StudyReport r = condition_study(sc);
        CellOutput out;
        for (std::size_t i = 0; i < r.size(); ++i) out.rows.push_back(r.row(i));
        out.setup.push_back({label(name, "", level), elapsed(t0)});
        return out;
      });
  }
  auto cells = run_tasks(tasks, c.jobs);
  // Reorder to curve, s, level.
  StudyReport report("fem-cond", {"curve", "s", "level", "dimV", "dimQ", "lambda_min", "lambda_max", "kappa"});
  ExperimentResult result{std::move(report), {}};
  std::size_t t = 0;
  for (std::size_t ci = 0; ci < c.curves.size(); ++ci) {
    std::vector<std::pair<double, Row>> rows;
    for (std::size_t li = 0; li < c.levels.size(); ++li, ++t) {
      for (auto& row : cells[t].rows) rows.emplace_back(std::get<double>(row[1]), row);
      result.setup.insert(result.setup.end(), cells[t].setup.begin(), cells[t].setup.end());
    }
    for (double s : c.s_values)
      for (auto& [rs, row] : rows)
        if (rs == s) result.report.add_row(row);
  }
  return result;
}

ExperimentResult run_babuska(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  for (const auto& name : c.curves) {
    const CurveKind kind = curve_kind_from_string(name);
    for (double s : c.s_values)
      for (int level : c.levels)
        tasks.push_back([=] {
          CellOutput out;
          const int n = uniform_cells(level);
          auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(n));
          const EmbeddedCurve curve = matched_curve(*mesh, kind);
          const FunctionSpace v(mesh, Element::P1);
          const FunctionSpace q(curve.mesh, Element::P1);
          const TraceMatrix trace = interpolation_trace(v, q);
          auto t0 = Clock::now();
          const FractionalNorm norm = build_fracnorm(q, s, BoundaryVariant::Neumann);
          const double t_norm = elapsed(t0);
          const Vector f = assemble_load(v, random_smooth_field(c.seed + 1));
          const Vector g = curve_load(q, random_smooth_field(c.seed + 2));
          t0 = Clock::now();
          const SaddleSystem sys = build_babuska(v, q, trace, norm, f, g, domain_options(c, 3, n));
          const double t_pre = elapsed(t0);
          const MinresResult res = solve(sys, minres_options(c));
          out.rows.push_back(iteration_row("babuska", name, "p1", s, level, n, sys, res.log.iterations, c.seed));
          const std::string tag = label(name, format_s(s), level);
          out.setup.push_back({tag + "/fractional-norm", t_norm});
          out.setup.push_back({tag + "/domain-block", t_pre});
          return out;
        });
  }
  return collect(StudyReport("babuska", iteration_columns()), run_tasks(tasks, c.jobs));
}

ExperimentResult run_coupled(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  const double s = c.s_values.empty() ? -0.14 : c.s_values.front();
  for (const auto& name : c.curves) {
    const CurveKind kind = curve_kind_from_string(name);
    for (int level : c.levels)
      tasks.push_back([=] {
        CellOutput out;
        const int n = uniform_cells(level);
        auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(n));
        const EmbeddedCurve curve = matched_curve(*mesh, kind);
        const FunctionSpace v(mesh, Element::P1);
        const FunctionSpace q(curve.mesh, Element::P1);
        const TraceMatrix trace = interpolation_trace(v, q);
        auto t0 = Clock::now();
        const auto scale = std::make_shared<const HilbertScale>(q, BoundaryVariant::Neumann);
        const FractionalNorm na(scale, s), nb(scale, -1.0);
        const double t_norm = elapsed(t0);
        const Vector f = assemble_load(v, random_smooth_field(c.seed + 1));
        const Vector g = curve_load(q, random_smooth_field(c.seed + 2));
        const Vector h = curve_load(q, random_smooth_field(c.seed + 3));
        t0 = Clock::now();
        const SaddleSystem sys = build_coupled(v, q, q, trace, na, nb, f, g, h, domain_options(c, 3, n));
        const double t_pre = elapsed(t0);
        const MinresResult res = solve(sys, minres_options(c));
        out.rows.push_back(iteration_row("coupled", name, "p1", s, level, n, sys, res.log.iterations, c.seed));
        const std::string tag = label(name, "", level);
        out.setup.push_back({tag + "/fractional-norm", t_norm});
        out.setup.push_back({tag + "/blocks", t_pre});
        return out;
      });
  }
  return collect(StudyReport("coupled", iteration_columns()), run_tasks(tasks, c.jobs));
}

ExperimentResult run_nonmatching_2d(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  for (Element e : elements_of(c))
    for (int level : c.levels)
      tasks.push_back([=] {
        const auto t0 = Clock::now();
        CellOutput out;
        out.rows.push_back(manufactured_level(level, e, minres_options(c)));
        out.setup.push_back({label("circle", element_name(e), level), elapsed(t0)});
        return out;
      });
  return collect(StudyReport("nonmatching-2d", iteration_columns()), run_tasks(tasks, c.jobs));
}

ExperimentResult run_nonmatching_3d(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  const double s = c.s_values.empty() ? -0.14 : c.s_values.front();
  for (const auto& name : c.curves) {
    const CurveKind kind = curve_kind_from_string(name);
    if (kind != CurveKind::SquareLoop && kind != CurveKind::Spiral && kind != CurveKind::Gamma1 &&
        kind != CurveKind::Gamma2)
      throw Error("nonmatching-3d supports square-loop, spiral, gamma1 and gamma2, got '" + name + "'");
    for (Element e : elements_of(c))
      for (int level : c.levels)
        tasks.push_back([=] {
          CellOutput out;
          const int n = nonmatching_3d_cells(level);
          auto mesh = std::make_shared<const SimplicialMesh>(cube_mesh(n));
          const EmbeddedCurve curve = independent_curve(kind, nonmatching_3d_segments(name, level, c.violate_ratio));
          const FunctionSpace v(mesh, Element::P1);
          const FunctionSpace q(curve.mesh, e);
          const TraceMatrix trace = interpolation_trace(v, q);
          auto t0 = Clock::now();
          const FractionalNorm norm = build_fracnorm(q, s, BoundaryVariant::Neumann);
          const double t_norm = elapsed(t0);
          const Vector f = assemble_load(v, random_smooth_field(c.seed + 1));
          const Vector g = curve_load(q, random_smooth_field(c.seed + 2));
          NonmatchingOptions no;
          no.allow_ratio_violation = c.violate_ratio;
          no.domain = domain_options(c, 3, n);
          t0 = Clock::now();
          const SaddleSystem sys = build_nonmatching(v, q, curve, trace, norm, f, g, no);
          const double t_pre = elapsed(t0);
          const MinresResult res = solve(sys, minres_options(c));
          out.rows.push_back(
              iteration_row("nonmatching-3d", name, element_name(e), s, level, n, sys, res.log.iterations, c.seed));
          const std::string tag = label(name, element_name(e), level);
          out.setup.push_back({tag + "/fractional-norm", t_norm});
          out.setup.push_back({tag + "/domain-block", t_pre});
          return out;
        });
  }
  return collect(StudyReport("nonmatching-3d", iteration_columns()), run_tasks(tasks, c.jobs));
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"spectral-cond", "fem-cond",       "babuska",
                                              "coupled",       "nonmatching-2d", "nonmatching-3d"};
  return names;
}

bool is_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ExperimentConfig default_config(const std::string& experiment) {
  if (!is_experiment(experiment)) throw Error("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  c.output = experiment + ".csv";
  if (experiment == "spectral-cond") {
    c.curves = {"gamma1"};
    c.s_values = {-0.14};
    c.n_values = {1024};
  } else if (experiment == "fem-cond") {
    c.curves = {"gamma1"};
    c.s_values = {-0.5, -0.16, -0.14, -0.12, -0.1, 0.0};
    c.levels = {1, 2, 3};
  } else if (experiment == "babuska") {
    c.curves = {"gamma1"};
    c.s_values = {-0.14};
    c.levels = {2, 3, 4};
  } else if (experiment == "coupled") {
    c.curves = {"gamma1"};
    c.s_values = {-0.14};
    c.levels = {2, 3, 4};
  } else if (experiment == "nonmatching-2d") {
    c.curves = {"circle"};
    c.s_values = {-0.5};
    c.levels = {1, 2, 3, 4};
  } else {
    c.curves = {"square-loop"};
    c.s_values = {-0.14};
    c.levels = {2, 3, 4};
  }
  return c;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  const auto range = t.find("..");
  if (range != std::string::npos) {
    const int a = to_int(trim(t.substr(0, range))), b = to_int(trim(t.substr(range + 2)));
    for (int i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_int(trim(item)));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(trim(text));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(trim(item)));
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value_in,
                   std::vector<std::string>& touched) {
  const std::string key = trim(key_in), value = trim(value_in);
  auto first_touch = [&](const std::string& k) {
    if (std::find(touched.begin(), touched.end(), k) != touched.end()) return false;
    touched.push_back(k);
    return true;
  };
  if (key == "experiment") {
    if (!is_experiment(value)) throw Error("unknown experiment '" + value + "'");
    c.experiment = value;
  } else if (key == "curve") {
    if (first_touch(key)) c.curves.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) c.curves.push_back(trim(item));
  } else if (key == "s") {
    if (first_touch(key)) c.s_values.clear();
    for (double v : parse_double_list(value)) c.s_values.push_back(v);
  } else if (key == "levels" || key == "level") {
    if (first_touch("levels")) c.levels.clear();
    for (int v : parse_int_list(value)) c.levels.push_back(v);
  } else if (key == "n") {
    if (first_touch(key)) c.n_values.clear();
    for (int v : parse_int_list(value)) c.n_values.push_back(v);
  } else if (key == "element") {
    c.element = value;
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "output") {
    c.output = value;
  } else if (key == "inner") {
    c.inner = value;
  } else if (key == "tolerance") {
    c.tolerance = to_double(value);
  } else if (key == "relative") {
    c.relative = parse_bool(value);
  } else if (key == "max_iterations") {
    c.max_iterations = to_int(value);
  } else if (key == "dirichlet_with_mass") {
    c.dirichlet_with_mass = parse_bool(value);
  } else if (key == "allow_large") {
    c.allow_large = parse_bool(value);
  } else if (key == "violate_ratio") {
    c.violate_ratio = parse_bool(value);
  } else if (key == "jobs") {
    c.jobs = to_int(value);
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::vector<std::string> touched;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(path + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      apply_setting(c, line.substr(0, eq), line.substr(eq + 1), touched);
    } catch (const Error& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

int nonmatching_3d_cells(int level) {
  if (level < 1 || level > 6) throw Error("refinement level " + std::to_string(level) + " out of range");
  return 16 * level - 1;
}

int nonmatching_3d_segments(const std::string& curve, int level, bool violate_ratio) {
  const int n = nonmatching_3d_cells(level);
  int m = curve == "square-loop" ? (n + 1) / 2 : n + 1;
  if (violate_ratio) m *= 4;
  return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.jobs < 1) throw Error("jobs must be at least 1");
  const std::string& e = config.experiment;
  if (e == "spectral-cond") return run_spectral(config);
  if (e == "fem-cond") return run_fem_cond(config);
  if (e == "babuska") return run_babuska(config);
  if (e == "coupled") return run_coupled(config);
  if (e == "nonmatching-2d") return run_nonmatching_2d(config);
  if (e == "nonmatching-3d") return run_nonmatching_3d(config);
  throw Error("unknown experiment '" + e + "'");
}

std::string run_manifest_json(const ExperimentConfig& c, const ExperimentResult& result, double wall_seconds,
                              const std::string& csv_path) {
  nlohmann::ordered_json cfg;
  cfg["experiment"] = c.experiment;
  cfg["curves"] = c.curves;
  cfg["s"] = c.s_values;
  cfg["levels"] = c.levels;
  cfg["n"] = c.n_values;
  cfg["element"] = c.element;
  cfg["inner"] = c.inner;
  cfg["tolerance"] = c.tolerance;
  cfg["relative"] = c.relative;
  cfg["max_iterations"] = c.max_iterations;
  cfg["dirichlet_with_mass"] = c.dirichlet_with_mass;
  cfg["allow_large"] = c.allow_large;
  cfg["violate_ratio"] = c.violate_ratio;
  cfg["jobs"] = c.jobs;
  nlohmann::ordered_json setup = nlohmann::ordered_json::array();
  for (const auto& t : result.setup) setup.push_back({{"label", t.label}, {"seconds", t.seconds}});
  nlohmann::ordered_json j;
  j["tool"] = "tracenorm";
  j["version"] = TRACENORM_VERSION;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["config"] = std::move(cfg);
  j["csv"] = csv_path;
  j["rows"] = result.report.size();
  j["wall_seconds"] = wall_seconds;
  j["setup_seconds"] = std::move(setup);
  return j.dump(2);
}

}  // namespace tracenorm
