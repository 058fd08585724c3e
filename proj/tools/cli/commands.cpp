#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli.hpp"
#include "radsing/errors.hpp"
#include "radsing/intersection.hpp"
#include "radsing/io.hpp"
#include "radsing/muscan.hpp"
#include "radsing/parallel.hpp"

namespace radsing::cli {

namespace {

using io::number;

double num(const json& j) { return j.get<double>(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool want_csv(const RunConfig& c) { return c.output().at("format") != "json"; }
bool want_json(const RunConfig& c) { return c.output().at("format") != "csv"; }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

void emit_trajectory(const RunConfig& cfg, const RadialSolution& sol, CommandOutput& out) {
  const auto rec = io::to_record(sol);
  if (want_csv(cfg)) out.files["trajectory.csv"] = io::trajectory_csv(rec.samples);
  if (want_json(cfg)) out.files["trajectory.json"] = io::trajectory_json(rec).dump(1) + "\n";
  std::vector<double> r, u;
  for (const auto& s : sol.samples)
    if (s.u > 0) {
      r.push_back(s.r);
      u.push_back(s.u);
    }
  out.files["u_vs_r.dat"] = io::two_column(r, u, "r u (log-log)");
}

json interval_json(const std::optional<MuInterval>& iv) {
  if (!iv) return nullptr;
  return {{"lo", number(iv->lo)}, {"hi", number(iv->hi)}, {"width", number(iv->width())}};
}

MuScanOptions mu_options(const RunConfig& cfg, int threads) {
  const json& t = cfg.task();
  MuScanOptions o;
  o.R1 = num(t.at("R1"));
  o.fast_tol = num(t.at("fast_tol"));
  o.probe_radius = num(t.at("probe_radius"));
  o.tail_radii = t.at("tail_radii").get<std::vector<double>>();
  o.threads = threads;
  o.singular = cfg.singular_options();
  return o;
}

json classification_json(const MuClassification& c) {
  return {{"mu", number(c.mu)},
          {"class", to_string(c.cls)},
          {"eta", number(c.eta)},
          {"r0", number(c.r0)},
          {"H", io::optional_number(c.H)},
          {"xi", number(c.xi)},
          {"flux_mismatch", number(c.flux_mismatch)},
          {"tail_r_max", number(c.tail_r_max)},
          {"reason", c.reason}};
}

int class_code(MuClass c) {
  switch (c) {
    case MuClass::FastDecay:
      return 0;
    case MuClass::SlowDecay:
      return 1;
    case MuClass::PositivityFailure:
      return 2;
    case MuClass::Undetermined:
      return 3;
  }
  return 3;
}

CommandOutput cmd_exponents(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.spec();
  const ExponentTable& t = spec.table;
  const RegimeReport& r = spec.regime;
  auto ext = [](const Extended& e) { return e.is_infinite() ? json("inf") : number(e.value()); };
  CommandOutput out;
  out.result = {{"N", t.N},
                {"p", number(t.p)},
                {"alpha", number(t.alpha)},
                {"beta", number(t.beta)},
                {"p_S_alpha", number(t.p_S_alpha)},
                {"p_JL_alpha", ext(t.p_JL_alpha)},
                {"p_S_beta", number(t.p_S_beta)},
                {"theta", number(t.theta)},
                {"a", number(t.a)},
                {"c", number(t.c)},
                {"A", number(t.A)},
                {"gamma", number(t.gamma)},
                {"theta_tilde", number(t.theta_tilde)},
                {"a_tilde", number(t.a_tilde)},
                {"c_tilde", number(t.c_tilde)},
                {"A_tilde", number(t.A_tilde)},
                {"gamma_tilde", number(t.gamma_tilde)},
                {"regime",
                 {{"supercritical_at_0", r.supercritical_at_0},
                  {"supercritical_at_inf", r.supercritical_at_inf},
                  {"below_JL", r.below_JL},
                  {"slow_decays_slower_than_fast", r.slow_decays_slower_than_fast}}}};
  std::ostringstream s;
  auto row = [&](const std::string& k, const std::string& v) {
    s << k << std::string(k.size() < 14 ? 14 - k.size() : 1, ' ') << v << "\n";
  };
  row("N", std::to_string(t.N));
  row("p", fmt("%.17g", t.p));
  row("alpha", fmt("%.17g", t.alpha));
  row("beta", fmt("%.17g", t.beta));
  row("p_S(alpha)", fmt("%.17g", t.p_S_alpha));
  row("p_JL(alpha)", t.p_JL_alpha.to_string());
  row("p_S(beta)", fmt("%.17g", t.p_S_beta));
  row("theta", fmt("%.17g", t.theta));
  row("gamma", fmt("%.17g", t.gamma));
  row("theta_tilde", fmt("%.17g", t.theta_tilde));
  row("gamma_tilde", fmt("%.17g", t.gamma_tilde));
  row("regime", r.below_JL ? "below_JL" : "at_or_above_JL");
  out.summary = s.str();
  return out;
}

CommandOutput cmd_solve(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.spec();
  SolverOptions so = cfg.solver_options();
  so.stop_at_zero = cfg.task().at("stop_at_zero").get<bool>();
  const double zeta = num(cfg.task().at("zeta"));
  const RadialSolution sol = regular_solve(spec, zeta, cfg.r_max(), so);
  CommandOutput out;
  out.result = {{"zeta", number(zeta)},
                {"termination", to_string(sol.termination)},
                {"r0", io::optional_number(sol.r0)},
                {"r_start", number(sol.r_start)},
                {"r_end", number(sol.r_max())},
                {"u_end", number(sol.samples.back().u)},
                {"samples", sol.samples.size()},
                {"note", sol.note}};
  emit_trajectory(cfg, sol, out);
  if (sol.termination == Termination::StepFailure)
    out.exit_code = sol.note.find("step budget") != std::string::npos ? kBudgetError : kSolverError;
  out.summary = "termination " + to_string(sol.termination) +
                (sol.r0 ? " r0 " + io::format_g17(*sol.r0) : "") + "\n";
  return out;
}

CommandOutput cmd_singular(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.spec();
  const SingularSolution s = singular_extend(spec, cfg.r_max(), cfg.singular_options());
  const auto& first = s.solution.samples.front();
  CommandOutput out;
  out.result = {{"positive", s.positive},
                {"r_fail", s.positive ? json(nullptr) : number(s.r_fail)},
                {"r_max", number(s.r_max)},
                {"t_start", number(s.t_start)},
                {"richardson_delta", number(s.richardson_delta)},
                {"r_ref", number(s.r_ref)},
                {"gamma", number(spec.table.gamma)},
                {"tail_ratio_deepest", number(std::pow(first.r, spec.table.theta) * first.u / spec.table.gamma)},
                {"r_deepest", number(first.r)}};
  emit_trajectory(cfg, s.solution, out);
  out.summary = s.positive ? "positive up to r " + io::format_g17(s.r_max) + "\n"
                           : "fails at r " + io::format_g17(s.r_fail) + "\n";
  return out;
}

CommandOutput cmd_intersections(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.spec();
  const json& t = cfg.task();
  const auto zetas = t.at("zeta_list").get<std::vector<double>>();
  const double rho = num(t.at("rho"));
  const GrowthTable g = intersection_growth(spec, zetas, rho, cfg.singular_options());
  CommandOutput out;
  json rows = json::array();
  std::vector<double> z, c;
  std::string csv = "zeta,count,first_scaled\n";
  for (const auto& r : g.rows) {
    json cr = json::array();
    for (double x : r.crossings) cr.push_back(number(x));
    rows.push_back({{"zeta", number(r.zeta)}, {"count", r.count}, {"crossings", cr},
                    {"first_scaled", number(r.first_scaled)}});
    z.push_back(r.zeta);
    c.push_back(r.count);
    csv += io::format_g17(r.zeta) + "," + std::to_string(r.count) + "," + io::format_g17(r.first_scaled) + "\n";
  }
  json sigma = nullptr;
  std::string sigma_note;
  const int terms = t.at("sigma_terms").get<int>();
  if (terms > 0) {
    if (spec.K.kind != CoefficientKind::PurePower || !spec.f.is_zero() || spec.mu != 0) {
      sigma_note = "sigma sequence needs K = k0 r^alpha and no forcing";
    } else {
      try {
        const auto seq = sigma_sequence(spec.N, spec.p, spec.alpha(), spec.K.k0, terms);
        sigma = json::array();
        for (double s : seq.sigma) sigma.push_back(number(s));
        if (!seq.alternation_ok) sigma_note = "alternation check failed";
      } catch (const RegimeError& e) {
        sigma_note = e.what();
      }
    }
  }
  out.result = {{"rho", number(rho)}, {"rows", rows}, {"nondecreasing", g.nondecreasing},
                {"sigma", sigma},     {"sigma_note", sigma_note}};
  out.files["count_vs_zeta.dat"] = io::two_column(z, c, "zeta count");
  if (want_csv(cfg)) out.files["intersections.csv"] = csv;
  out.summary = "counts";
  for (const auto& r : g.rows) out.summary += " " + std::to_string(r.count);
  out.summary += "\n";
  return out;
}

CommandOutput cmd_sweep_zeta(const RunConfig& cfg, int threads) {
  const ProblemSpec spec = cfg.spec();
  const json& t = cfg.task();
  const auto zetas = log_grid(num(t.at("zeta_min")), num(t.at("zeta_max")), t.at("points").get<int>());
  const double r_max = cfg.r_max();
  const double rho = t.at("rho").is_null() ? r_max : std::min(num(t.at("rho")), r_max);
  const SingularOptions sopts = cfg.singular_options();
  const SingularSolution star = singular_extend(spec, rho, sopts);
  const double hi_star = star.positive ? rho : star.r_fail;

  struct Row {
    double zeta;
    Termination term;
    std::optional<double> r0;
    double r_end;
    int count;
    std::string note;
  };
  std::vector<Row> rows(zetas.size());
  parallel_for(zetas.size(), threads, [&](std::size_t i) {
    const RadialSolution u = regular_solve(spec, zetas[i], r_max, sopts.solver);
    const double hi = std::min(hi_star, u.r_max());
    const int count = count_intersections(u, star.solution, 0.0, hi).count;
    rows[i] = {zetas[i], u.termination, u.r0, u.r_max(), count, u.note};
  });

  CommandOutput out;
  json jr = json::array();
  std::vector<double> c;
  std::string csv = "zeta,termination,r0,count\n";
  int failures = 0, budget = 0;
  for (const auto& r : rows) {
    jr.push_back({{"zeta", number(r.zeta)}, {"termination", to_string(r.term)}, {"r0", io::optional_number(r.r0)},
                  {"r_end", number(r.r_end)}, {"count", r.count}, {"note", r.note}});
    c.push_back(r.count);
    csv += io::format_g17(r.zeta) + "," + to_string(r.term) + "," + (r.r0 ? io::format_g17(*r.r0) : "") + "," +
           std::to_string(r.count) + "\n";
    if (r.term == Termination::StepFailure) {
      ++failures;
      if (r.note.find("step budget") != std::string::npos) ++budget;
    }
  }
  out.result = {{"rho", number(rho)},
                {"singular_positive", star.positive},
                {"singular_r_fail", star.positive ? json(nullptr) : number(star.r_fail)},
                {"rows", jr}};
  out.files["count_vs_zeta.dat"] = io::two_column(zetas, c, "zeta count");
  if (want_csv(cfg)) out.files["sweep_zeta.csv"] = csv;
  if (failures) out.exit_code = budget == failures ? kBudgetError : kSolverError;
  out.summary = std::to_string(rows.size()) + " points, " + std::to_string(failures) + " step failures\n";
  return out;
}

CommandOutput cmd_scan_mu(const RunConfig& cfg, int threads) {
  const ProblemSpec spec = cfg.spec();
  const json& t = cfg.task();
  const MuScanOptions opts = mu_options(cfg, threads);
  std::optional<double> mu_max;
  if (!t.at("mu_max").is_null()) mu_max = num(t.at("mu_max"));
  const MuScanReport rep = scan_mu(spec, t.at("grid_points").get<int>(), num(t.at("mu1_tol")), opts, mu_max);

  CommandOutput out;
  json grid = json::array(), roots = json::array();
  std::vector<double> mus, cls, hm, hv;
  std::string csv = "mu,class,H,eta,r0\n";
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    const auto& c = rep.grid[i];
    json j = classification_json(c);
    j["H_signed"] = number(rep.H[i]);
    grid.push_back(j);
    mus.push_back(c.mu);
    cls.push_back(class_code(c.cls));
    if (!std::isnan(rep.H[i])) {
      hm.push_back(c.mu);
      hv.push_back(rep.H[i]);
    }
    csv += io::format_g17(c.mu) + "," + to_string(c.cls) + "," + io::format_g17(rep.H[i]) + "," +
           io::format_g17(c.eta) + "," + io::format_g17(c.r0) + "\n";
  }
  for (const auto& r : rep.fast_roots)
    roots.push_back({{"interval", interval_json(r.interval)}, {"H_lo", number(r.H_lo)}, {"H_hi", number(r.H_hi)}});
  out.result = {{"grid", grid},
                {"window", {{"lo", number(rep.window.lo)}, {"hi", number(rep.window.hi)}}},
                {"mu_probe", number(rep.mu_probe)},
                {"mu_max", number(rep.mu_max)},
                {"mu1_estimate", interval_json(rep.mu1_estimate)},
                {"mu1_note", rep.mu1_note},
                {"fast_roots", roots},
                {"mu_star_bracket", interval_json(rep.mu_star_bracket)},
                {"consistent", rep.consistent}};
  out.files["class_vs_mu.dat"] = io::two_column(mus, cls, "mu class (0 fast, 1 slow, 2 positivity_failure, 3 undetermined)");
  out.files["H_vs_mu.dat"] = io::two_column(hm, hv, "mu H");
  if (want_csv(cfg)) out.files["scan_mu.csv"] = csv;
  out.summary = rep.mu1_estimate ? "mu1 in [" + io::format_g17(rep.mu1_estimate->lo) + ", " +
                                       io::format_g17(rep.mu1_estimate->hi) + "]\n"
                                 : "mu1 not located: " + rep.mu1_note + "\n";
  return out;
}

CommandOutput cmd_census(const RunConfig& cfg, int threads) {
  const ProblemSpec spec = cfg.spec();
  const json& t = cfg.task();
  const MuScanOptions opts = mu_options(cfg, threads);
  std::optional<MuInterval> mu1;
  double mu;
  if (t.at("mu").is_null()) {
    mu1 = find_mu1(spec, num(t.at("mu1_tol")), opts);
    mu = num(t.at("mu_over_mu1")) * mu1->mid();
  } else {
    mu = num(t.at("mu"));
  }
  const auto zetas = log_grid(num(t.at("zeta_min")), num(t.at("zeta_max")), t.at("points").get<int>());
  const CensusReport rep = bounded_solution_census(spec.with_mu(mu), zetas, num(t.at("r_budget")), opts);

  CommandOutput out;
  json rows = json::array(), inc = json::array();
  std::vector<double> c;
  std::string csv = "zeta,positive,tail_settled,r0,r_end,count\n";
  for (const auto& r : rep.rows) {
    rows.push_back({{"zeta", number(r.zeta)}, {"positive", r.positive}, {"tail_settled", r.tail_settled},
                    {"r0", number(r.r0)}, {"r_end", number(r.r_end)}, {"count", r.count},
                    {"budget_exhausted", r.budget_exhausted}, {"note", r.note}});
    c.push_back(r.count);
    csv += io::format_g17(r.zeta) + "," + (r.positive ? "1" : "0") + "," + (r.tail_settled ? "1" : "0") + "," +
           io::format_g17(r.r0) + "," + io::format_g17(r.r_end) + "," + std::to_string(r.count) + "\n";
  }
  for (const auto& i : rep.increments)
    inc.push_back({{"zeta_lo", number(i.zeta_lo)}, {"zeta_hi", number(i.zeta_hi)},
                   {"count_lo", i.count_lo}, {"count_hi", i.count_hi}});
  out.result = {{"mu", number(mu)},
                {"mu1_estimate", interval_json(mu1)},
                {"r_budget", number(rep.r_budget)},
                {"rows", rows},
                {"increments", inc},
                {"total_increments", rep.total_increments},
                {"total_decrements", rep.total_decrements},
                {"candidates", rep.candidates}};
  out.files["count_vs_zeta.dat"] = io::two_column(zetas, c, "zeta count");
  if (want_csv(cfg)) out.files["census.csv"] = csv;
  out.summary = std::to_string(rep.increments.size()) + " increments, " + std::to_string(rep.candidates) +
                " candidates at mu " + io::format_g17(mu) + "\n";
  return out;
}

}  // namespace

CommandOutput execute(const RunConfig& cfg, int threads) {
  const std::string& c = cfg.command;
  if (c == "exponents") return cmd_exponents(cfg);
  if (c == "solve") return cmd_solve(cfg);
  if (c == "singular") return cmd_singular(cfg);
  if (c == "intersections") return cmd_intersections(cfg);
  if (c == "sweep-zeta") return cmd_sweep_zeta(cfg, threads);
  if (c == "scan-mu") return cmd_scan_mu(cfg, threads);
  if (c == "census") return cmd_census(cfg, threads);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace radsing::cli
