#include "radsing/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "radsing/errors.hpp"

namespace radsing::io {

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  if (j.is_null()) return NAN;
  throw ConfigError("expected a number, got " + j.dump());
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TrajectoryRecord to_record(const RadialSolution& sol) {
  TrajectoryRecord r;
  r.zeta = sol.zeta;
  r.termination = to_string(sol.termination);
  r.r0 = sol.r0;
  r.r_start = sol.r_start;
  r.rtol = sol.rtol;
  r.atol = sol.atol;
  r.note = sol.note;
  r.samples = sol.samples;
  return r;
}

std::string trajectory_csv(const std::vector<Sample>& samples) {
  std::string out = "r,u,du\n";
  for (const auto& s : samples)
    out += format_g17(s.r) + "," + format_g17(s.u) + "," + format_g17(s.du) + "\n";
  return out;
}

std::vector<Sample> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Sample> out;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "r,u,du") continue;
    Sample s{};
    char* end = nullptr;
    const char* p = line.c_str();
    double* dst[3] = {&s.r, &s.u, &s.du};
    for (int k = 0; k < 3; ++k) {
      *dst[k] = std::strtod(p, &end);
      if (end == p) throw TableError("trajectory CSV line " + std::to_string(lineno) + " is malformed");
      p = end;
      if (k < 2) {
        if (*p != ',') throw TableError("trajectory CSV line " + std::to_string(lineno) + " needs 3 columns");
        ++p;
      }
    }
    out.push_back(s);
  }
  return out;
}

json trajectory_json(const TrajectoryRecord& rec) {
  json r = json::array(), u = json::array(), du = json::array();
  for (const auto& s : rec.samples) {
    r.push_back(number(s.r));
    u.push_back(number(s.u));
    du.push_back(number(s.du));
  }
  return {{"zeta", rec.zeta ? number(*rec.zeta) : json("singular")},
          {"termination", rec.termination},
          {"r0", optional_number(rec.r0)},
          {"r_start", number(rec.r_start)},
          {"rtol", number(rec.rtol)},
          {"atol", number(rec.atol)},
          {"note", rec.note},
          {"samples", {{"r", r}, {"u", u}, {"du", du}}}};
}

TrajectoryRecord parse_trajectory_json(const json& j) {
  TrajectoryRecord rec;
  const auto& z = j.at("zeta");
  if (!(z.is_string() && z.get<std::string>() == "singular")) rec.zeta = to_double(z);
  rec.termination = j.at("termination").get<std::string>();
  if (!j.at("r0").is_null()) rec.r0 = to_double(j.at("r0"));
  rec.r_start = to_double(j.at("r_start"));
  rec.rtol = to_double(j.at("rtol"));
  rec.atol = to_double(j.at("atol"));
  rec.note = j.at("note").get<std::string>();
  const auto& s = j.at("samples");
  const auto &r = s.at("r"), &u = s.at("u"), &du = s.at("du");
  if (r.size() != u.size() || r.size() != du.size())
    throw TableError("trajectory JSON sample columns differ in length");
  for (std::size_t i = 0; i < r.size(); ++i)
    rec.samples.push_back({to_double(r[i]), to_double(u[i]), to_double(du[i])});
  return rec;
}

std::string two_column(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& header) {
  std::string out;
  if (!header.empty()) out += "# " + header + "\n";
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    out += format_g17(x[i]) + " " + format_g17(y[i]) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace radsing::io
