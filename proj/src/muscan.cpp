#include "radsing/muscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radsing/errors.hpp"
#include "radsing/parallel.hpp"

namespace radsing {

std::string to_string(MuClass c) {
  switch (c) {
    case MuClass::FastDecay:
      return "fast_decay";
    case MuClass::SlowDecay:
      return "slow_decay";
    case MuClass::PositivityFailure:
      return "positivity_failure";
    default:
      return "undetermined";
  }
}

namespace {

bool is_slow(const MuClassification& c) { return c.cls == MuClass::SlowDecay; }

double settle_ratio(const RadialSolution& sol, double exponent) {
  const double rL = sol.r_max(), r10 = rL / 10;
  if (r10 < sol.r_min()) return NAN;
  return std::pow(rL, exponent) * sol.u(rL) / (std::pow(r10, exponent) * sol.u(r10));
}

int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

MuClassifier::MuClassifier(const ProblemSpec& spec, const MuScanOptions& opts)
    : spec_(spec), opts_(opts), match_(spec, opts.R1, std::nullopt, opts.farfield) {
  if (opts.tail_radii.empty()) throw ConfigError("tail_radii must not be empty");
  for (double r : opts.tail_radii)
    if (!(r > 10 * opts.R1)) throw ConfigError("tail radii must exceed 10·R1");
}

MuClassification MuClassifier::classify(double mu, std::optional<EtaWindow> window) const {
  if (!(mu >= 0)) throw DomainError("mu must be nonnegative");
  const ProblemSpec s = spec_.with_mu(mu);
  const double R1 = opts_.R1;
  const int N = s.N;
  MuClassification c;
  c.mu = mu;
  bool matched = false;
  bool tried_match = false;
  auto try_match = [&](const RadialSolution& sol) {
    if (tried_match) return;
    tried_match = true;
    try {
      const Mismatch m = mismatch_H(match_.at_mu(mu, window), sol, mu);
      c.H = m.H;
      c.xi = m.xi;
      c.flux_mismatch = std::pow(R1, N - 1) * std::abs(m.H) / ((N - 2) * m.eta);
      if (c.flux_mismatch <= opts_.fast_tol) {
        matched = true;
        c.eta = m.eta;
      }
    } catch (const Error& e) {
      c.reason = std::string("H unavailable: ") + e.what();
    }
  };

  std::string tail_reason;
  for (double r_tail : opts_.tail_radii) {
    const SingularSolution star = singular_extend(s, r_tail, opts_.singular);
    c.tail_r_max = r_tail;
    if (!star.positive) {
      c.r0 = star.r_fail;
      if (c.r0 > R1) try_match(star.solution);
      if (matched) {
        c.cls = MuClass::FastDecay;
        c.reason = "u* tracks a fast-decay exterior profile at R1; the zero at r0 lies in the "
                   "unresolvable tail";
      } else {
        c.cls = MuClass::PositivityFailure;
      }
      return c;
    }
    try_match(star.solution);
    c.slow_ratio = settle_ratio(star.solution, s.table.theta_tilde);
    const EtaEstimate tail = eta_limit(star.solution, R1);
    if (tail.status == EtaStatus::SlowDecayDetected) {
      c.cls = MuClass::SlowDecay;
      c.eta = NAN;
      return c;
    }
    if (tail.status == EtaStatus::Fast || matched) {
      c.cls = MuClass::FastDecay;
      if (!matched) c.eta = tail.eta;
      return c;
    }
    tail_reason = tail.reason;
  }
  c.cls = MuClass::Undetermined;
  c.reason = "tail test inconclusive up to r=" + std::to_string(c.tail_r_max) + ": " + tail_reason;
  return c;
}

double MuClassifier::signed_mismatch(double mu) const {
  const ProblemSpec s = spec_.with_mu(mu);
  const double R1 = opts_.R1;
  const SingularSolution star = singular_extend(s, 2 * R1, opts_.singular);
  if (!star.positive && star.r_fail <= R1) return -std::numeric_limits<double>::infinity();
  try {
    return mismatch_H(match_.at_mu(mu), star.solution, mu).H;
  } catch (const Error&) {
    return NAN;
  }
}

MuClassification classify_mu(const ProblemSpec& spec, double mu, const MuScanOptions& opts) {
  return MuClassifier(spec, opts).classify(mu);
}

double positivity_probe(const ProblemSpec& spec, const MuScanOptions& opts) {
  auto fails = [&](double mu) {
    return !singular_extend(spec.with_mu(mu), opts.probe_radius, opts.singular).positive;
  };
  double mu = opts.probe_start;
  if (fails(mu)) {
    for (int k = 0; k < opts.probe_doublings; ++k) {
      if (!fails(0.5 * mu)) return mu;
      mu *= 0.5;
    }
    throw BudgetError("positivity probe: failure persists down to tiny mu");
  }
  for (int k = 0; k < opts.probe_doublings; ++k) {
    mu *= 2;
    if (fails(mu)) return mu;
  }
  throw BudgetError("positivity probe: no failure below r=" + std::to_string(opts.probe_radius) +
                    " within the doubling budget");
}

namespace {

MuInterval bisect_mu1(const MuClassifier& C, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (is_slow(C.classify(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

std::optional<FastRoot> refine_root(const MuClassifier& C, double lo, double hi, double H_lo,
                                    double H_hi) {
  const int s_lo = sign_of(H_lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double Hm = C.signed_mismatch(mid);
    if (std::isnan(Hm)) return std::nullopt;
    if (Hm == 0) return FastRoot{{mid, mid}, Hm, Hm};
    if (sign_of(Hm) == s_lo) {
      lo = mid;
      H_lo = Hm;
    } else {
      hi = mid;
      H_hi = Hm;
    }
  }
  return FastRoot{{lo, hi}, H_lo, H_hi};
}

double signed_from(const MuClassification& c, double R1) {
  if (c.cls == MuClass::PositivityFailure && c.r0 <= R1)
    return -std::numeric_limits<double>::infinity();
  return c.H ? *c.H : NAN;
}

void collect_roots(const MuClassifier& C, const std::vector<double>& grid,
                   const std::vector<double>& H, std::vector<FastRoot>& roots,
                   std::vector<MuInterval>& skipped) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = H[i], b = H[i + 1];
    if (std::isnan(a) || std::isnan(b)) {
      skipped.push_back({grid[i], grid[i + 1]});
      continue;
    }
    if (std::isinf(a) && std::isinf(b)) continue;
    if (a == 0) {
      roots.push_back({{grid[i], grid[i]}, 0, 0});
      continue;
    }
    if (sign_of(a) == sign_of(b) || b == 0) continue;
    if (auto r = refine_root(C, grid[i], grid[i + 1], a, b))
      roots.push_back(*r);
    else
      skipped.push_back({grid[i], grid[i + 1]});
  }
}

}  // namespace

MuInterval find_mu1(const ProblemSpec& spec, double tol, const MuScanOptions& opts,
                    std::optional<double> mu_max) {
  if (!(tol > 0)) throw DomainError("tol must be positive");
  const MuClassifier C(spec, opts);
  if (!is_slow(C.classify(0)))
    throw RegimeError("classify_mu(0) is not SlowDecay; mu_1 is undefined");
  const double top = mu_max ? *mu_max : 2 * positivity_probe(spec, opts);
  const int n = std::max(1, opts.coarse_points);
  double prev = 0;
  for (int k = 1; k <= n; ++k) {
    const double mu = top * k / n;
    if (!is_slow(C.classify(mu))) return bisect_mu1(C, prev, mu, tol);
    prev = mu;
  }
  throw NotBracketed("no class change from SlowDecay up to mu_max");
}

FastRootScan find_fast_roots(const ProblemSpec& spec, double mu_lo, double mu_hi, int grid_n,
                             const MuScanOptions& opts) {
  if (!(mu_hi > mu_lo) || grid_n < 1) throw DomainError("need mu_lo < mu_hi and grid_n >= 1");
  const MuClassifier C(spec, opts);
  FastRootScan out;
  out.grid.resize(grid_n + 1);
  out.H.resize(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) out.grid[i] = mu_lo + (mu_hi - mu_lo) * i / grid_n;
  parallel_for(out.grid.size(), opts.threads,
               [&](std::size_t i) { out.H[i] = C.signed_mismatch(out.grid[i]); });
  collect_roots(C, out.grid, out.H, out.roots, out.skipped);
  return out;
}

CensusReport bounded_solution_census(const ProblemSpec& spec, const std::vector<double>& zeta_grid,
                                     double r_budget, const MuScanOptions& opts) {
  CensusReport rep;
  rep.mu = spec.mu;
  rep.r_budget = r_budget;
  if (zeta_grid.empty()) return rep;
  if (!std::is_sorted(zeta_grid.begin(), zeta_grid.end()))
    throw DomainError("zeta grid must be increasing");
  const SingularSolution star = singular_extend(spec, r_budget, opts.singular);
  if (!star.positive)
    throw PositivityError("singular solution vanishes at r=" + std::to_string(star.r_fail) +
                          " before the census budget");
  SolverOptions so = opts.singular.solver;
  so.stop_at_zero = true;
  const double tt = spec.table.theta_tilde;
  rep.rows.resize(zeta_grid.size());
  parallel_for(zeta_grid.size(), opts.threads, [&](std::size_t i) {
    CensusRow row{};
    row.zeta = zeta_grid[i];
    const RadialSolution u = regular_solve(spec, row.zeta, r_budget, so);
    if (u.termination == Termination::StepFailure) {
      row.budget_exhausted = true;
      row.note = u.note;
    }
    row.positive = u.termination == Termination::ReachedRmax;
    if (u.r0) row.r0 = *u.r0;
    row.r_end = u.r_max();
    if (row.positive) {
      const double slow = settle_ratio(u, tt), fast = settle_ratio(u, spec.N - 2);
      row.tail_settled = std::abs(slow - 1) < 0.01 || std::abs(fast - 1) < 0.01;
    }
    row.count = count_intersections(star.solution, u, 0, row.r_end).count;
    rep.rows[i] = row;
  });
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto &a = rep.rows[i], &b = rep.rows[i + 1];
    if (b.count > a.count) {
      rep.increments.push_back({a.zeta, b.zeta, a.count, b.count});
      rep.total_increments += b.count - a.count;
    } else if (b.count < a.count) {
      rep.total_decrements += a.count - b.count;
    }
  }
  for (const auto& r : rep.rows)
    if (r.positive && r.tail_settled) ++rep.candidates;
  return rep;
}

MuScanReport scan_mu(const ProblemSpec& spec, int grid_n, double mu1_tol,
                     const MuScanOptions& opts, std::optional<double> mu_max) {
  if (grid_n < 1) throw DomainError("grid_n must be at least 1");
  const MuClassifier C(spec, opts);
  MuScanReport rep;
  if (mu_max) {
    rep.mu_max = *mu_max;
  } else {
    rep.mu_probe = positivity_probe(spec, opts);
    rep.mu_max = 2 * rep.mu_probe;
  }
  const int n = grid_n;
  rep.grid.resize(n + 1);
  parallel_for(std::size_t(n + 1), opts.threads,
               [&](std::size_t i) { rep.grid[i] = C.classify(rep.mu_max * double(i) / n); });

  double lo = INFINITY, hi = 0;
  for (const auto& c : rep.grid)
    if (std::isfinite(c.xi) && c.xi > 0) {
      lo = std::min(lo, c.xi);
      hi = std::max(hi, c.xi);
    }
  if (hi > 0) rep.window = {0.5 * lo, 2 * hi};

  std::vector<double> mus(n + 1), H(n + 1);
  for (int i = 0; i <= n; ++i) {
    mus[i] = rep.grid[i].mu;
    H[i] = signed_from(rep.grid[i], opts.R1);
  }
  std::vector<MuInterval> skipped;
  collect_roots(C, mus, H, rep.fast_roots, skipped);
  rep.H = H;

  if (!is_slow(rep.grid[0])) {
    rep.mu1_note = "mu=0 is not SlowDecay";
  } else {
    int k = 1;
    while (k <= n && is_slow(rep.grid[k])) ++k;
    if (k > n)
      rep.mu1_note = "no class change up to mu_max";
    else
      rep.mu1_estimate = bisect_mu1(C, mus[k - 1], mus[k], mu1_tol);
  }

  int last = -1;
  for (int i = 0; i <= n; ++i)
    if (rep.grid[i].cls != MuClass::PositivityFailure) last = i;
  if (last < n) rep.mu_star_bracket = last < 0 ? MuInterval{0, 0} : MuInterval{mus[last], mus[last + 1]};

  for (int i = 0; i < n; ++i) {
    const auto &a = rep.grid[i], &b = rep.grid[i + 1];
    if (a.cls == MuClass::FastDecay && b.cls == MuClass::FastDecay) rep.consistent = false;
    if (a.cls == MuClass::FastDecay || b.cls == MuClass::FastDecay) continue;
    if (a.cls == MuClass::Undetermined || b.cls == MuClass::Undetermined) continue;
    if (a.cls == b.cls) continue;
    const bool split = std::any_of(rep.fast_roots.begin(), rep.fast_roots.end(), [&](const FastRoot& r) {
      return r.interval.lo >= a.mu && r.interval.hi <= b.mu;
    });
    if (!split) rep.consistent = false;
  }
  return rep;
}

}  // namespace radsing
