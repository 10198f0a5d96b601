#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/experiments.hpp"

namespace {

void usage(std::ostream& os) {
  os << "usage: tracenorm <experiment> [options]\n\nexperiments:\n";
  for (const auto& n : tracenorm::experiment_names()) os << "  " << n << '\n';
  os << "\nrun 'tracenorm <experiment> --help' for options\n";
}

std::string manifest_path(const std::string& csv) {
  if (csv == "-") return "";
  const auto dot = csv.rfind(".csv");
  if (dot != std::string::npos && dot + 4 == csv.size()) return csv.substr(0, dot) + ".json";
  return csv + ".json";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 2;
  }
  const std::string sub = argv[1];
  if (sub == "--help" || sub == "-h") {
    usage(std::cout);
    return 0;
  }
  if (sub == "--version") {
    std::cout << "tracenorm " << TRACENORM_CLI_VERSION << '\n';
    return 0;
  }
  if (!tracenorm::is_experiment(sub)) {
    std::cerr << "unknown experiment '" << sub << "'\n\n";
    usage(std::cerr);
    return 2;
  }

  CLI::App app{"Run the " + sub + " experiment", "tracenorm " + sub};
  std::string config_file, curves, s_values, levels, n_values, element, output, manifest, inner;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  int max_iterations = 0, jobs = 0;
  bool relative = false, with_mass = false, allow_large = false, violate = false;

  app.add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);
  auto* o_curve = app.add_option("--curve", curves, "curve name(s), comma separated");
  auto* o_s = app.add_option("--s", s_values, "exponent(s), comma separated")->allow_extra_args(false);
  auto* o_levels = app.add_option("--levels", levels, "levels as 2..5 or 2,3,4 (may be empty)");
  auto* o_n = app.add_option("--n", n_values, "spectral mode counts as 1024 or 1024,4096");
  auto* o_element = app.add_option("--element", element, "multiplier element: p1, p0 or both");
  auto* o_seed = app.add_option("--seed", seed, "random seed (overrides TRACENORM_SEED)");
  auto* o_output = app.add_option("--output,-o", output, "CSV path, '-' for stdout");
  app.add_option("--manifest", manifest, "JSON manifest path (default: CSV path with .json)");
  auto* o_inner = app.add_option("--inner", inner, "cholesky, cg (fem-cond) or multigrid");
  auto* o_tol = app.add_option("--tolerance", tolerance, "MINRES tolerance");
  auto* o_rel = app.add_flag("--relative", relative, "relative instead of absolute MINRES criterion");
  auto* o_max = app.add_option("--max-iterations", max_iterations, "MINRES iteration cap");
  auto* o_mass = app.add_flag("--dirichlet-with-mass", with_mass, "use stiffness + mass for H_{s,0}");
  auto* o_large = app.add_flag("--allow-large", allow_large, "permit dense gamma2 runs up to n = 512");
  auto* o_violate = app.add_flag("--violate-ratio", violate, "nonmatching-3d: make the curve finer than the mesh");
  auto* o_jobs = app.add_option("--jobs,-j", jobs, "parallel cells")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 2; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    tracenorm::ExperimentConfig cfg = tracenorm::default_config(sub);
    if (!config_file.empty()) tracenorm::load_config_file(cfg, config_file);
    if (cfg.experiment != sub) throw tracenorm::Error("config file names experiment '" + cfg.experiment + "'");
    if (const char* env = std::getenv("TRACENORM_SEED"); env && *env) cfg.seed = std::stoull(env);

    std::vector<std::string> touched;
    auto set = [&](CLI::Option* opt, const std::string& key, const std::string& value) {
      if (opt->count() > 0) tracenorm::apply_setting(cfg, key, value, touched);
    };
    set(o_curve, "curve", curves);
    set(o_s, "s", s_values);
    set(o_levels, "levels", levels);
    set(o_n, "n", n_values);
    set(o_element, "element", element);
    set(o_seed, "seed", std::to_string(seed));
    set(o_output, "output", output);
    set(o_inner, "inner", inner);
    set(o_tol, "tolerance", CLI::detail::to_string(tolerance));
    set(o_rel, "relative", "true");
    set(o_max, "max_iterations", std::to_string(max_iterations));
    set(o_mass, "dirichlet_with_mass", "true");
    set(o_large, "allow_large", "true");
    set(o_violate, "violate_ratio", "true");
    set(o_jobs, "jobs", std::to_string(jobs));
    if (o_levels->count() > 0 && tracenorm::parse_int_list(levels).empty()) cfg.levels.clear();

    const auto t0 = std::chrono::steady_clock::now();
    const tracenorm::ExperimentResult result = tracenorm::run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (cfg.output == "-") {
      result.report.write_csv(std::cout);
    } else {
      std::ofstream csv(cfg.output);
      if (!csv) throw tracenorm::Error("cannot write '" + cfg.output + "'");
      result.report.write_csv(csv);
    }
    const std::string mpath = manifest.empty() ? manifest_path(cfg.output) : manifest;
    if (!mpath.empty()) {
      std::ofstream js(mpath);
      if (!js) throw tracenorm::Error("cannot write '" + mpath + "'");
      js << tracenorm::run_manifest_json(cfg, result, wall, cfg.output) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "tracenorm " << sub << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
