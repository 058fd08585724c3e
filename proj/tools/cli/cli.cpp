#include "cli.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "radsing/errors.hpp"
#include "radsing/io.hpp"

namespace radsing::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return kBudgetError;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const RegimeError*>(&e))
    return kConfigError;
  return kSolverError;
}

}  // namespace

std::string resolve_output_root(const std::string& flag, const RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RADSING_OUT"); env && *env) return env;
  const auto dir = cfg.output().at("directory").get<std::string>();
  return dir.empty() ? "out" : dir;
}

json make_report(const RunConfig& cfg, const CommandOutput& out, const std::string& timestamp) {
  const json& s = cfg.solver();
  json versions = {{"radsing", kVersion},
                   {"schema", kSchemaVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"cli11", CLI11_VERSION}};
  json prov = {{"config_hash", cfg.hash()},
               {"config", cfg.effective},
               {"inputs", cfg.input_hashes},
               {"versions", versions},
               {"tolerances",
                {{"rtol", s.at("rtol")}, {"atol", s.at("atol")}, {"richardson_tol", s.at("richardson_tol")}}},
               {"timestamp", timestamp}};
  return {{"command", cfg.command},
          {"status", out.exit_code == kOk ? "ok" : out.exit_code == kBudgetError ? "budget_exhausted" : "solver_failure"},
          {"exit_code", out.exit_code},
          {"provenance", prov},
          {"result", out.result}};
}

int run(int argc, char** argv) {
  CLI::App app{"Radial solutions of semilinear elliptic equations with forcing"};
  app.require_subcommand(1);
  std::string config_path, out_flag, format;
  bool force = false;
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_flag, "output root directory");
  app.add_flag("--force", force, "recompute even when cached results exist");
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "trajectory and table format")->check(CLI::IsMember({"csv", "json", "both"}));
  for (const auto& c : commands()) app.add_subcommand(c)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = config_path.empty() ? default_config(command) : load_config(config_path, command);
    if (!format.empty()) cfg.effective["output"]["format"] = format;
    const fs::path root = resolve_output_root(out_flag, cfg);
    cfg.effective["output"]["directory"] = root.string();
    const fs::path dir = root / (command + "_" + cfg.hash());
    const fs::path report_path = dir / "report.json";

    if (!force && fs::exists(report_path)) {
      const json cached = json::parse(io::read_file(report_path.string()));
      std::cout << "cached " << dir.string() << "\n";
      return cached.value("exit_code", 0);
    }

    const CommandOutput out = execute(cfg, threads);
    fs::create_directories(dir);
    for (const auto& [name, bytes] : out.files) io::write_file((dir / name).string(), bytes);
    io::write_file((dir / "config.json").string(), cfg.effective.dump(2) + "\n");
    io::write_file(report_path.string(), make_report(cfg, out, utc_timestamp()).dump(2) + "\n");
    std::cout << out.summary << "wrote " << dir.string() << "\n";
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> store{"radsing"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  return run(int(argv.size()), argv.data());
}

}  // namespace radsing::cli
