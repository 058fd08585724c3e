#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "radsing/errors.hpp"
#include "radsing/io.hpp"

namespace radsing::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"exponents",   "solve",   "singular", "intersections",
                                          "sweep-zeta", "scan-mu", "census"};
  return c;
}

std::map<std::string, int> json_line_index(const std::string& text) {
  struct Frame {
    bool object;
    std::string ptr, key;
    int index = 0;
    bool expect_key = true;
  };
  std::map<std::string, int> out;
  std::vector<Frame> stack;
  int line = 1;
  auto child = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    return f.ptr + "/" + (f.object ? f.key : std::to_string(f.index));
  };
  auto mark_value = [&] {
    if (!stack.empty() && !stack.back().object) out.emplace(child(), line);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
    } else if (ch == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
        out.emplace(child(), line);
      } else {
        mark_value();
      }
    } else if (ch == '{' || ch == '[') {
      const std::string ptr = child();
      out.emplace(ptr, line);
      stack.push_back({ch == '{', ptr, "", 0, true});
    } else if (ch == '}' || ch == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (ch == ',') {
      if (!stack.empty()) {
        if (stack.back().object)
          stack.back().expect_key = true;
        else
          ++stack.back().index;
      }
    } else if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ':') {
      mark_value();
    }
  }
  return out;
}

namespace {

enum class T { Num, Int, Str, Bool, NumArray, OptNum, Obj };

struct Field {
  std::string name;
  T type;
  json def;
  bool required = false;
};

class Validator {
 public:
  explicit Validator(std::map<std::string, int> lines) : lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    while (true) {
      auto it = lines_.find(p);
      if (it != lines_.end()) throw ConfigError("config line " + std::to_string(it->second) + ": " + msg);
      if (p.empty()) break;
      p = p.substr(0, p.rfind('/'));
    }
    throw ConfigError("config: " + msg);
  }

  json block(const json& in, const std::string& ptr, const std::vector<Field>& fields) const {
    const std::string name = ptr.empty() ? "top level" : "'" + ptr.substr(1) + "'";
    if (!in.is_object()) fail(ptr, name + " must be an object");
    for (const auto& [k, v] : in.items())
      if (std::none_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == k; }))
        fail(ptr + "/" + k, "unknown key '" + k + "' in " + name);
    json out = json::object();
    for (const auto& f : fields) {
      const std::string fp = ptr + "/" + f.name;
      if (!in.contains(f.name)) {
        if (f.required) fail(ptr, "missing required key '" + f.name + "' in " + name);
        out[f.name] = f.def;
        continue;
      }
      const json& v = in.at(f.name);
      switch (f.type) {
        case T::Num:
          if (!v.is_number()) fail(fp, "'" + f.name + "' must be a number");
          out[f.name] = v.get<double>();
          break;
        case T::OptNum:
          if (!v.is_number() && !v.is_null()) fail(fp, "'" + f.name + "' must be a number or null");
          out[f.name] = v.is_null() ? json(nullptr) : json(v.get<double>());
          break;
        case T::Int:
          if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>())))
            fail(fp, "'" + f.name + "' must be an integer");
          out[f.name] = static_cast<long long>(v.get<double>());
          break;
        case T::Str:
          if (!v.is_string()) fail(fp, "'" + f.name + "' must be a string");
          out[f.name] = v;
          break;
        case T::Bool:
          if (!v.is_boolean()) fail(fp, "'" + f.name + "' must be true or false");
          out[f.name] = v;
          break;
        case T::Obj:
          if (!v.is_object()) fail(fp, "'" + f.name + "' must be an object");
          out[f.name] = v;
          break;
        case T::NumArray: {
          if (!v.is_array()) fail(fp, "'" + f.name + "' must be an array of numbers");
          json arr = json::array();
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(fp + "/" + std::to_string(i), "'" + f.name + "' must hold numbers");
            arr.push_back(v[i].get<double>());
          }
          out[f.name] = arr;
          break;
        }
      }
    }
    return out;
  }

  void require(bool ok, const std::string& ptr, const std::string& msg) const {
    if (!ok) fail(ptr, msg);
  }

 private:
  std::map<std::string, int> lines_;
};

const json kDefaultZetas = json::array({1e2, 1e3, 1e4, 1e5, 1e6});
const json kDefaultTails = json::array({1e3, 1e4, 1e5, 1e6});

std::vector<Field> mu_scan_fields() {
  return {{"R1", T::Num, 10.0},
          {"fast_tol", T::Num, 1e-3},
          {"probe_radius", T::Num, 10.0},
          {"tail_radii", T::NumArray, kDefaultTails},
          {"mu1_tol", T::Num, 1e-3}};
}

std::vector<Field> task_fields(const std::string& cmd) {
  if (cmd == "exponents" || cmd == "singular") return {};
  if (cmd == "solve") return {{"zeta", T::Num, 1.0}, {"stop_at_zero", T::Bool, true}};
  if (cmd == "intersections")
    return {{"zeta_list", T::NumArray, kDefaultZetas}, {"rho", T::Num, 1.0}, {"sigma_terms", T::Int, 4}};
  if (cmd == "sweep-zeta")
    return {{"zeta_min", T::Num, 1.0}, {"zeta_max", T::Num, 1e6}, {"points", T::Int, 61}, {"rho", T::OptNum, nullptr}};
  auto f = mu_scan_fields();
  if (cmd == "scan-mu") {
    f.push_back({"grid_points", T::Int, 32});
    f.push_back({"mu_max", T::OptNum, nullptr});
    return f;
  }
  f.push_back({"zeta_min", T::Num, 10.0});
  f.push_back({"zeta_max", T::Num, 1e6});
  f.push_back({"points", T::Int, 200});
  f.push_back({"r_budget", T::Num, 1e3});
  f.push_back({"mu", T::OptNum, nullptr});
  f.push_back({"mu_over_mu1", T::Num, 0.5});
  return f;
}

json profile_block(const Validator& V, const json& in, const std::string& ptr, bool coefficient,
                   const std::string& base_dir, std::map<std::string, std::string>& hashes) {
  if (!in.is_object()) V.fail(ptr, "'" + ptr.substr(1) + "' must be an object");
  if (!in.contains("kind")) V.fail(ptr, "missing required key 'kind' in '" + ptr.substr(1) + "'");
  if (!in.at("kind").is_string()) V.fail(ptr + "/kind", "'kind' must be a string");
  const std::string kind = in.at("kind").get<std::string>();
  std::vector<Field> f{{"kind", T::Str, kind}};
  if (coefficient) {
    if (kind == "pure_power") {
      f.insert(f.end(), {{"alpha", T::Num, 0.0}, {"k0", T::Num, 1.0}});
    } else if (kind == "blended_power") {
      f.insert(f.end(), {{"alpha", T::Num, 0.0},
                         {"k0", T::Num, 1.0},
                         {"beta", T::Num, 0.0},
                         {"k_inf", T::Num, 1.0},
                         {"blend_radius", T::Num, 1.0}});
    } else if (kind == "tabulated") {
      f.insert(f.end(), {{"path", T::Str, "", true}, {"alpha", T::OptNum, nullptr}, {"beta", T::OptNum, nullptr}});
    } else {
      V.fail(ptr + "/kind", "unknown K kind '" + kind + "' (pure_power, blended_power, tabulated)");
    }
  } else {
    if (kind == "zero") {
    } else if (kind == "power_decay_bump") {
      f.insert(f.end(), {{"nu", T::Num, 0.0}, {"q", T::Num, 14.0}, {"amplitude", T::Num, 1.0}});
    } else if (kind == "compact_bump") {
      f.insert(f.end(), {{"r1", T::Num, 0.0, true}, {"r2", T::Num, 0.0, true}, {"amplitude", T::Num, 1.0}});
    } else if (kind == "tabulated") {
      f.insert(f.end(), {{"path", T::Str, "", true}, {"nu", T::OptNum, nullptr}, {"q", T::OptNum, nullptr}});
    } else {
      V.fail(ptr + "/kind", "unknown f kind '" + kind + "' (zero, power_decay_bump, compact_bump, tabulated)");
    }
  }
  json out = V.block(in, ptr, f);
  if (kind == "tabulated") {
    fs::path p = out.at("path").get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    std::error_code ec;
    const fs::path abs = fs::weakly_canonical(p, ec);
    if (ec || !fs::exists(abs)) V.fail(ptr + "/path", "table file not found: " + p.string());
    out["path"] = abs.string();
    hashes[abs.string()] = io::fnv1a_hex(io::read_file(abs.string()));
  }
  return out;
}

double num(const json& j) { return j.get<double>(); }
std::optional<double> opt(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

RunConfig build(const json& in, const std::string& command, const std::string& base_dir,
                const Validator& V) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw ConfigError("unknown command '" + command + "'");
  RunConfig cfg;
  cfg.command = command;
  const json top = V.block(in, "",
                           {{"version", T::Int, 0, true},
                            {"command", T::Str, command},
                            {"problem", T::Obj, json::object()},
                            {"solver", T::Obj, json::object()},
                            {"task", T::Obj, json::object()},
                            {"output", T::Obj, json::object()}});
  V.require(top.at("version").get<int>() == kSchemaVersion, "/version",
            "unsupported config version " + top.at("version").dump() + " (expected " +
                std::to_string(kSchemaVersion) + ")");
  V.require(top.at("command").get<std::string>() == command, "/command",
            "config is for '" + top.at("command").get<std::string>() + "', not '" + command + "'");

  const json& pin = top.at("problem");
  json problem = V.block(pin, "/problem",
                         {{"N", T::Int, 13},
                          {"p", T::Num, 2.0},
                          {"K", T::Obj, json{{"kind", "pure_power"}}},
                          {"f", T::Obj, json{{"kind", "zero"}}},
                          {"mu", T::Num, 0.0}});
  problem["K"] = profile_block(V, problem.at("K"), "/problem/K", true, base_dir, cfg.input_hashes);
  problem["f"] = profile_block(V, problem.at("f"), "/problem/f", false, base_dir, cfg.input_hashes);
  V.require(num(problem.at("p")) > 1, "/problem/p", "p must exceed 1");
  V.require(num(problem.at("mu")) >= 0, "/problem/mu", "mu must be nonnegative");

  json solver = V.block(top.at("solver"), "/solver",
                        {{"rtol", T::Num, 1e-10},
                         {"atol", T::Num, 1e-12},
                         {"r_max", T::Num, 1e3},
                         {"t_start", T::Num, -30.0},
                         {"t_max_step", T::Num, 0.05},
                         {"r_rel_step", T::Num, 0.05},
                         {"richardson_tol", T::Num, 1e-8},
                         {"max_steps", T::Int, 2000000}});
  for (const char* k : {"rtol", "atol", "r_max", "t_max_step", "r_rel_step", "richardson_tol"})
    V.require(num(solver.at(k)) > 0, std::string("/solver/") + k, std::string(k) + " must be positive");
  V.require(num(solver.at("t_start")) < 0, "/solver/t_start", "t_start must be negative");
  V.require(solver.at("max_steps").get<long long>() > 0, "/solver/max_steps", "max_steps must be positive");

  json task = V.block(top.at("task"), "/task", task_fields(command));
  auto positive = [&](const char* k) {
    if (task.contains(k) && !task.at(k).is_null()) V.require(num(task.at(k)) > 0, std::string("/task/") + k, std::string(k) + " must be positive");
  };
  for (const char* k : {"zeta", "rho", "zeta_min", "R1", "fast_tol", "probe_radius", "mu1_tol", "r_budget", "mu_over_mu1"})
    positive(k);
  if (task.contains("zeta_max"))
    V.require(num(task.at("zeta_max")) > num(task.at("zeta_min")), "/task/zeta_max", "zeta_max must exceed zeta_min");
  if (task.contains("points"))
    V.require(task.at("points").get<long long>() >= 2, "/task/points", "points must be at least 2");
  if (task.contains("grid_points"))
    V.require(task.at("grid_points").get<long long>() >= 1, "/task/grid_points", "grid_points must be at least 1");
  if (task.contains("sigma_terms"))
    V.require(task.at("sigma_terms").get<long long>() >= 0, "/task/sigma_terms", "sigma_terms must be nonnegative");
  if (task.contains("zeta_list")) {
    V.require(!task.at("zeta_list").empty(), "/task/zeta_list", "zeta_list must not be empty");
    for (const auto& z : task.at("zeta_list")) V.require(num(z) > 0, "/task/zeta_list", "zeta_list entries must be positive");
  }
  if (task.contains("tail_radii")) {
    V.require(!task.at("tail_radii").empty(), "/task/tail_radii", "tail_radii must not be empty");
    for (const auto& z : task.at("tail_radii")) V.require(num(z) > num(task.at("R1")), "/task/tail_radii", "tail_radii must exceed R1");
  }
  for (const char* k : {"mu_max", "mu"})
    if (task.contains(k) && !task.at(k).is_null())
      V.require(num(task.at(k)) >= 0, std::string("/task/") + k, std::string(k) + " must be nonnegative");

  json output = V.block(top.at("output"), "/output", {{"directory", T::Str, "out"}, {"format", T::Str, "both"}});
  const auto fmt = output.at("format").get<std::string>();
  V.require(fmt == "csv" || fmt == "json" || fmt == "both", "/output/format", "format must be csv, json or both");

  cfg.effective = {{"version", kSchemaVersion}, {"command", command}, {"problem", problem},
                   {"solver", solver},          {"task", task},       {"output", output}};
  return cfg;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + int(std::count(text.begin(), text.begin() + long(byte), '\n'));
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& command, const std::string& base_dir) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of_byte(text, e.byte)) + ": invalid JSON (" + e.what() + ")");
  }
  return build(in, command, base_dir, Validator(json_line_index(text)));
}

RunConfig load_config(const std::string& path, const std::string& command) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
  const fs::path dir = fs::absolute(path).parent_path();
  return parse_config(io::read_file(path), command, dir.string());
}

RunConfig default_config(const std::string& command) {
  return build(json{{"version", kSchemaVersion}}, command, ".", Validator({}));
}

ProblemSpec RunConfig::spec() const {
  const json& P = problem();
  const json& k = P.at("K");
  const json& f = P.at("f");
  CoefficientProfile K;
  const auto kk = k.at("kind").get<std::string>();
  if (kk == "pure_power") {
    K = CoefficientProfile::pure_power(num(k.at("alpha")), num(k.at("k0")));
  } else if (kk == "blended_power") {
    K = CoefficientProfile::blended_power(num(k.at("alpha")), num(k.at("k0")), num(k.at("beta")),
                                          num(k.at("k_inf")), num(k.at("blend_radius")));
  } else {
    const auto t = read_two_column_csv(k.at("path").get<std::string>());
    K = CoefficientProfile::tabulated(t.r, t.v, opt(k.at("alpha")), opt(k.at("beta")));
  }
  ForcingProfile F;
  const auto fk = f.at("kind").get<std::string>();
  if (fk == "zero") {
    F = ForcingProfile::zero();
  } else if (fk == "power_decay_bump") {
    F = ForcingProfile::power_decay_bump(num(f.at("nu")), num(f.at("q")), num(f.at("amplitude")));
  } else if (fk == "compact_bump") {
    F = ForcingProfile::compact_bump(num(f.at("r1")), num(f.at("r2")), num(f.at("amplitude")));
  } else {
    const auto t = read_two_column_csv(f.at("path").get<std::string>());
    F = ForcingProfile::tabulated(t.r, t.v, opt(f.at("nu")), opt(f.at("q")));
  }
  return make_problem(P.at("N").get<int>(), num(P.at("p")), K, F, num(P.at("mu")));
}

SolverOptions RunConfig::solver_options() const {
  const json& s = solver();
  SolverOptions o;
  o.rtol = num(s.at("rtol"));
  o.atol = num(s.at("atol"));
  o.t_max_step = num(s.at("t_max_step"));
  o.r_rel_step = num(s.at("r_rel_step"));
  o.max_steps = s.at("max_steps").get<std::size_t>();
  return o;
}

SingularOptions RunConfig::singular_options() const {
  SingularOptions o;
  o.solver = solver_options();
  o.t_start = num(solver().at("t_start"));
  o.richardson_tol = num(solver().at("richardson_tol"));
  return o;
}

std::string RunConfig::hash() const {
  json h = effective;
  h["output"].erase("directory");
  h["inputs"] = input_hashes;
  return io::fnv1a_hex(h.dump());
}

}  // namespace radsing::cli
