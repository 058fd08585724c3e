#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsing/profiles.hpp"
#include "radsing/singular.hpp"

namespace radsing::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

const std::vector<std::string>& commands();

/// Validated configuration. `effective` holds every field with defaults filled in and is what the
/// provenance block and the config hash are built from.
struct RunConfig {
  std::string command;
  json effective;
  std::map<std::string, std::string> input_hashes;  // tabulated file path -> FNV-1a of its bytes

  const json& problem() const { return effective.at("problem"); }
  const json& solver() const { return effective.at("solver"); }
  const json& task() const { return effective.at("task"); }
  const json& output() const { return effective.at("output"); }

  ProblemSpec spec() const;
  SolverOptions solver_options() const;
  SingularOptions singular_options() const;
  double r_max() const { return solver().at("r_max").get<double>(); }
  /// Hash over everything that affects results (the output directory is excluded).
  std::string hash() const;
};

/// Parses and validates JSON text. base_dir resolves relative table paths.
RunConfig parse_config(const std::string& text, const std::string& command,
                       const std::string& base_dir = ".");
RunConfig load_config(const std::string& path, const std::string& command);
/// Configuration made only of defaults (no --config given).
RunConfig default_config(const std::string& command);

/// Line of each JSON pointer ("/problem/K/kind") in the source text, keys and values alike.
std::map<std::string, int> json_line_index(const std::string& text);

}  // namespace radsing::cli
