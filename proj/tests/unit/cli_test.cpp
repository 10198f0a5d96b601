#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tracenorm/error.hpp"
#include "tracenorm/experiments.hpp"
#include "tracenorm/report.hpp"

using namespace tracenorm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "tracenorm_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + TRACENORM_CLI_PATH + "\" " + args + " >" +
                          (scratch_dir() / "stdout.txt").string() + " 2>" + (scratch_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse_int_list: ranges, lists and empty input") {
  CHECK(parse_int_list("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_int_list("2,3") == std::vector<int>{2, 3});
  CHECK(parse_int_list(" 4 ") == std::vector<int>{4});
  CHECK(parse_int_list("").empty());
  CHECK(parse_int_list("5..4").empty());
  CHECK_THROWS_AS(parse_int_list("x"), Error);
  CHECK(parse_double_list("-0.14, 0") == std::vector<double>{-0.14, 0.0});
}

TEST_CASE("config: key=value lines, comments and repeated list keys") {
  const fs::path p = scratch_dir() / "cfg.txt";
  {
    std::ofstream out(p);
    out << "# comment\nexperiment = babuska\ncurve = gamma2  # trailing\ncurve = tree\ns = -0.3\nlevels = 0..1\n\n"
           "seed = 42\ninner = multigrid\n";
  }
  ExperimentConfig c = default_config("babuska");
  CHECK(c.curves == std::vector<std::string>{"gamma1"});
  load_config_file(c, p.string());
  CHECK(c.curves == std::vector<std::string>{"gamma2", "tree"});
  CHECK(c.s_values == std::vector<double>{-0.3});
  CHECK(c.levels == std::vector<int>{0, 1});
  CHECK(c.seed == 42u);
  CHECK(c.inner == "multigrid");

  {
    std::ofstream out(p);
    out << "experiment = babuska\nbogus = 1\n";
  }
  try {
    load_config_file(c, p.string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  {
    std::ofstream out(p);
    out << "no equals sign\n";
  }
  CHECK_THROWS_AS(load_config_file(c, p.string()), Error);
  CHECK_THROWS_AS(default_config("nope"), Error);
  CHECK(experiment_names().size() == 6);
}

TEST_CASE("report: CSV, JSON and fitted rate") {
  StudyReport r("demo", {"name", "value", "count", "missing"});
  r.add_row({std::string("a"), 0.125, std::int64_t{3}, std::monostate{}});
  r.add_row({std::string("b"), 1.0 / 3.0, std::int64_t{4}, std::monostate{}});
  std::ostringstream os;
  r.write_csv(os);
  CHECK(os.str() == "name,value,count,missing\na,0.125,3,\nb,0.3333333333,4,\n");
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["experiment"] == "demo");
  CHECK(j["rows"][1]["count"] == 4);
  CHECK(j["rows"][0]["missing"].is_null());
  CHECK(std::isnan(r.number(0, "missing")));
  CHECK_THROWS(r.add_row({std::string("short")}));
  CHECK_THROWS(r.at(0, "nope"));

  const std::vector<double> h{0.1, 0.05, 0.025};
  CHECK(fitted_rate(h, {0.01, 0.0025, 0.000625}) == doctest::Approx(2.0));
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cli: exit codes") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-experiment") == 2);
  CHECK(slurp(scratch_dir() / "stderr.txt").find("unknown experiment") != std::string::npos);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("babuska --bogus-flag") == 2);
  CHECK(run_cli("babuska --curve circle --levels 0") == 1);
}

TEST_CASE("cli: empty level list yields a header-only CSV") {
  const fs::path out = scratch_dir() / "empty.csv";
  CHECK(run_cli("babuska --levels \"\" -o " + out.string()) == 0);
  CHECK(slurp(out) == "experiment,curve,element,s,level,n,dimV,dimW,dimQ,iterations,errH1,errQs,seed\n");
}

TEST_CASE("cli: reruns are byte identical and the manifest is written") {
  const fs::path a = scratch_dir() / "run_a.csv", b = scratch_dir() / "run_b.csv";
  REQUIRE(run_cli("babuska --levels 0 --s -0.14,0 -o " + a.string()) == 0);
  REQUIRE(run_cli("babuska --levels 0 --s -0.14,0 -o " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("babuska,gamma1,p1,-0.14,0,8,729,,9,") != std::string::npos);

  const auto m = nlohmann::json::parse(slurp(scratch_dir() / "run_a.json"));
  CHECK(m.contains("seed"));
  CHECK(m.contains("wall_seconds"));
  CHECK(m.contains("version"));
  CHECK(m["config"]["experiment"] == "babuska");
}

TEST_CASE("cli: TRACENORM_SEED and --seed") {
  const fs::path a = scratch_dir() / "seed_env.csv", b = scratch_dir() / "seed_flag.csv";
  REQUIRE(run_cli("babuska --levels 0 -o " + a.string(), "TRACENORM_SEED=5") == 0);
  CHECK(slurp(a).find(",5\n") != std::string::npos);
  REQUIRE(run_cli("babuska --levels 0 --seed 9 -o " + b.string(), "TRACENORM_SEED=5") == 0);
  CHECK(slurp(b).find(",9\n") != std::string::npos);
}
