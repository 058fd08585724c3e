#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsing/trajectory.hpp"

namespace radsing::io {

using json = nlohmann::json;

/// Finite values as numbers, the rest as "inf", "-inf" or "nan".
json number(double x);
double to_double(const json& j);
json optional_number(const std::optional<double>& x);

std::string format_g17(double x);

struct TrajectoryRecord {
  std::optional<double> zeta;
  std::string termination = "reached_rmax";
  std::optional<double> r0;
  double r_start = 0, rtol = 0, atol = 0;
  std::string note;
  std::vector<Sample> samples;
};

TrajectoryRecord to_record(const RadialSolution& sol);

/// Header "r,u,du" followed by one %.17g row per sample.
std::string trajectory_csv(const std::vector<Sample>& samples);
std::vector<Sample> parse_trajectory_csv(const std::string& text);

json trajectory_json(const TrajectoryRecord& rec);
TrajectoryRecord parse_trajectory_json(const json& j);

/// Two whitespace-separated columns, %.17g.
std::string two_column(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& header = "");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace radsing::io
