#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/io.hpp"

using namespace radsing;
using namespace radsing::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("radsing_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string write(const fs::path& p, const std::string& s) {
  io::write_file(p.string(), s);
  return p.string();
}

std::string strip_timestamp(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("defaults are filled and recorded") {
    const RunConfig c = parse_config(R"({"version": 1})", "scan-mu");
    CHECK(c.problem().at("N") == 13);
    CHECK(c.task().at("grid_points") == 32);
    CHECK(c.task().at("mu_max").is_null());
    CHECK(c.solver().at("rtol") == 1e-10);
    CHECK(c.output().at("format") == "both");
  }

  TEST_CASE("unknown keys are rejected with a line reference") {
    const std::string text = "{\"version\": 1,\n \"problem\": {\n  \"N\": 13,\n  \"nn\": 2}}";
    try {
      parse_config(text, "exponents");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
      CHECK(std::string(e.what()).find("nn") != std::string::npos);
    }
  }

  TEST_CASE("schema violations") {
    CHECK_THROWS_AS(parse_config("{}", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 2})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "task": {"zeta": "x"}})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "task": {"rho": 1}})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "command": "census"})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "problem": {"K": {"kind": "cubic"}}})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "output": {"format": "xml"}})", "solve"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"version\": 1,\n", "solve"), ConfigError);
  }

  TEST_CASE("hash ignores the output directory but not the problem") {
    const RunConfig a = parse_config(R"({"version": 1, "output": {"directory": "a"}})", "solve");
    const RunConfig b = parse_config(R"({"version": 1, "output": {"directory": "b"}})", "solve");
    const RunConfig c = parse_config(R"({"version": 1, "problem": {"p": 3}})", "solve");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
  }

  TEST_CASE("line index") {
    const auto idx = json_line_index("{\n\"a\": {\n \"b\": [1,\n 2]}}");
    CHECK(idx.at("/a") == 2);
    CHECK(idx.at("/a/b") == 3);
    CHECK(idx.at("/a/b/1") == 4);
  }

  TEST_CASE("exit codes") {
    const fs::path d = scratch_dir("exit");
    CHECK(run({"solve", "--config", (d / "missing.json").string(), "--out", d.string()}) == kConfigError);
    const auto n2 = write(d / "n2.json", R"({"version": 1, "problem": {"N": 2}})");
    CHECK(run({"exponents", "--config", n2, "--out", d.string()}) == kConfigError);
    CHECK(run({"bogus"}) == kConfigError);
    const auto tiny = write(d / "tiny.json", R"({"version": 1, "solver": {"max_steps": 5}})");
    CHECK(run({"solve", "--config", tiny, "--out", d.string()}) == kBudgetError);
    CHECK(run({"exponents", "--out", d.string()}) == kOk);
  }

  TEST_CASE("p_JL is written as inf for N=10") {
    const fs::path d = scratch_dir("inf");
    const auto cfg = write(d / "n10.json", R"({"version": 1, "problem": {"N": 10}})");
    REQUIRE(run({"exponents", "--config", cfg, "--out", d.string()}) == kOk);
    const RunConfig c = load_config(cfg, "exponents");
    const auto rep = io::json::parse(io::read_file((d / ("exponents_" + c.hash()) / "report.json").string()));
    CHECK(rep.at("result").at("p_JL_alpha") == "inf");
  }

  TEST_CASE("solve writes an increasing trajectory and reports hit_zero") {
    const fs::path d = scratch_dir("solve");
    const auto cfg = write(d / "c.json", R"({"version": 1,
      "problem": {"f": {"kind": "power_decay_bump", "q": 14}, "mu": 30000},
      "solver": {"r_max": 100}})");
    REQUIRE(run({"solve", "--config", cfg, "--out", d.string()}) == kOk);
    const fs::path dir = d / ("solve_" + load_config(cfg, "solve").hash());
    const auto rep = io::json::parse(io::read_file((dir / "report.json").string()));
    CHECK(rep.at("result").at("termination") == "hit_zero");
    CHECK(rep.at("result").at("r0").is_number());
    const auto tr = io::parse_trajectory_json(io::json::parse(io::read_file((dir / "trajectory.json").string())));
    CHECK(tr.termination == "hit_zero");
    const auto csv = io::read_file((dir / "trajectory.csv").string());
    const auto samples = io::parse_trajectory_csv(csv);
    for (std::size_t i = 1; i < samples.size(); ++i) REQUIRE(samples[i].r > samples[i - 1].r);
    CHECK(io::trajectory_csv(samples) == csv);
    CHECK(fs::exists(dir / "u_vs_r.dat"));
  }

  TEST_CASE("cache hit, force and format") {
    const fs::path d = scratch_dir("cache");
    REQUIRE(run({"singular", "--out", d.string(), "--format", "csv"}) == kOk);
    const fs::path dir = *fs::directory_iterator(d);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK_FALSE(fs::exists(dir / "trajectory.json"));
    fs::remove(dir / "trajectory.csv");
    REQUIRE(run({"singular", "--out", d.string(), "--format", "csv"}) == kOk);
    CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
    REQUIRE(run({"singular", "--out", d.string(), "--format", "csv", "--force"}) == kOk);
    CHECK(fs::exists(dir / "trajectory.csv"));
  }

  TEST_CASE("output directory precedence") {
    const RunConfig c = parse_config(R"({"version": 1, "output": {"directory": "from_config"}})", "solve");
    CHECK(resolve_output_root("flag", c) == "flag");
    ::setenv("RADSING_OUT", "from_env", 1);
    CHECK(resolve_output_root("", c) == "from_env");
    ::unsetenv("RADSING_OUT");
    CHECK(resolve_output_root("", c) == "from_config");
    CHECK(resolve_output_root("", parse_config(R"({"version": 1})", "solve")) == "out");
  }

  TEST_CASE("reruns are byte-identical apart from the timestamp") {
    const fs::path d = scratch_dir("det");
    const auto cfg = write(d / "c.json", R"({"version": 1, "task": {"zeta_list": [100, 1000, 10000]}})");
    REQUIRE(run({"intersections", "--config", cfg, "--out", d.string()}) == kOk);
    const fs::path out = d / ("intersections_" + load_config(cfg, "intersections").hash());
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(out)) first[e.path().filename()] = io::read_file(e.path().string());
    REQUIRE(run({"intersections", "--config", cfg, "--out", d.string(), "--force"}) == kOk);
    for (const auto& [name, bytes] : first) {
      const auto again = io::read_file((out / name).string());
      if (name == "report.json")
        CHECK(strip_timestamp(again) == strip_timestamp(bytes));
      else
        CHECK(again == bytes);
    }
  }

  TEST_CASE("emitted config reproduces the run") {
    const fs::path d = scratch_dir("repro");
    REQUIRE(run({"exponents", "--out", d.string()}) == kOk);
    const fs::path out = *fs::directory_iterator(d);
    const RunConfig again = load_config((out / "config.json").string(), "exponents");
    CHECK(out.filename().string() == "exponents_" + again.hash());
  }
}
