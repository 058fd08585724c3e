#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace radsing::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kSolverError = 3, kBudgetError = 4 };

struct CommandOutput {
  json result;
  std::map<std::string, std::string> files;  // name -> bytes, written next to report.json
  int exit_code = kOk;
  std::string summary;  // printed to stdout
};

CommandOutput execute(const RunConfig& cfg, int threads);

/// Output root: flag, then RADSING_OUT, then output.directory, then "out".
std::string resolve_output_root(const std::string& flag, const RunConfig& cfg);

/// report.json contents: provenance, status and result.
json make_report(const RunConfig& cfg, const CommandOutput& out, const std::string& timestamp);

int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace radsing::cli
