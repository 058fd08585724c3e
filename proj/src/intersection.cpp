#include "radsing/intersection.hpp"

#include <algorithm>
#include <cmath>

#include "radsing/errors.hpp"
#include "radsing/numerics/hermite.hpp"

namespace radsing {

namespace {

int sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace

IntersectionReport count_intersections(const RadialSolution& a, const RadialSolution& b,
                                       double r_lo, double r_hi,
                                       const IntersectionOptions& opts) {
  IntersectionReport rep;
  rep.zeta = a.zeta.value_or(0.0);
  const double lo = r_lo > 0 ? r_lo : std::max(a.r_min(), b.r_min());
  rep.r_lo = lo;
  rep.rho = r_hi;
  if (!(lo < r_hi)) throw DomainError("empty intersection interval");
  if (!a.covers(lo, r_hi) || !b.covers(lo, r_hi))
    throw CoverageError("trajectories do not span the requested interval");

  std::vector<double> grid;
  for (const auto* s : {&a, &b})
    for (const Sample& x : s->samples)
      if (x.r >= lo && x.r <= r_hi) grid.push_back(x.r);
  const int n_log = std::max(1, int(std::ceil(std::log10(r_hi / lo) * opts.points_per_decade)));
  for (int i = 0; i <= n_log; ++i) grid.push_back(lo * std::pow(r_hi / lo, double(i) / n_log));
  grid.push_back(lo);
  grid.push_back(r_hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(),
                            [&](double r) { return r < lo || r > r_hi; }),
             grid.end());

  const double atol = std::max(a.atol, b.atol);
  auto classify = [&](double r, double& d) {
    const double ua = a.u(r), ub = b.u(r);
    d = ua - ub;
    const double band = opts.noise_factor * atol * std::max({1.0, std::abs(ua), std::abs(ub)});
    return std::abs(d) <= band ? 0 : sign_of(d);
  };

  int last_sign = 0;
  std::size_t last_idx = 0;
  bool in_band = false, any_determined = false;
  double band_start = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d;
    const int s = classify(grid[i], d);
    if (s == 0) {
      if (!in_band) band_start = grid[i];
      in_band = true;
      continue;
    }
    any_determined = true;
    if (last_sign != 0 && s != last_sign) {
      double x0 = grid[last_idx], x1 = grid[i];
      double d0 = a.u(x0) - b.u(x0);
      for (int it = 0; it < 200 && x1 - x0 > 1e-14 * x1; ++it) {
        const double xm = 0.5 * (x0 + x1);
        const double dm = a.u(xm) - b.u(xm);
        if (sign_of(dm) == sign_of(d0) && dm != 0) {
          x0 = xm;
          d0 = dm;
        } else {
          x1 = xm;
        }
      }
      const double rc = 0.5 * (x0 + x1);
      const int slope = sign_of(a.du(rc) - b.du(rc));
      rep.crossings.push_back({rc,
                               i == last_idx + 1 ? CrossingConfidence::Refined
                                                 : CrossingConfidence::GridLevel,
                               slope == 0 ? s : slope});
    } else if (in_band && last_sign != 0) {
      rep.near_tangencies.push_back(band_start);
    }
    in_band = false;
    last_sign = s;
    last_idx = i;
  }
  rep.degenerate = !any_determined;
  rep.count = int(rep.crossings.size());
  for (std::size_t k = 1; k < rep.crossings.size(); ++k)
    if (rep.crossings[k].slope_sign == rep.crossings[k - 1].slope_sign) rep.alternating = false;
  return rep;
}

SigmaSequence sigma_sequence(int N, double p, double alpha, double k0, int n_max,
                             const SigmaOptions& opts) {
  const ProblemSpec spec =
      make_problem(N, p, CoefficientProfile::pure_power(alpha, k0), ForcingProfile::zero(), 0);
  if (!spec.regime.supercritical_at_0 || !spec.regime.below_JL)
    throw RegimeError("sigma sequence requires p_S(alpha) < p < p_JL(alpha)");
  SolverOptions so;
  so.rtol = opts.rtol;
  so.atol = opts.atol;
  const auto traj = regular_emden_fowler(spec, 1.0, opts.t_max, so);
  if (traj.status != numerics::OdeStatus::Completed) throw SolverError("sigma integration failed");

  SigmaSequence out;
  const auto& S = traj.samples;
  for (std::size_t i = 0; i + 1 < S.size() && int(out.sigma.size()) < n_max; ++i) {
    if (sign_of(S[i].z) == sign_of(S[i + 1].z) || S[i].z == 0) continue;
    const double s0 = deviation_second_derivative(spec, S[i].t, S[i].z, S[i].dw);
    const double s1 = deviation_second_derivative(spec, S[i + 1].t, S[i + 1].z, S[i + 1].dw);
    numerics::QuinticHermite<double> q(S[i].t, S[i + 1].t, S[i].z, S[i].dw, s0, S[i + 1].z,
                                       S[i + 1].dw, s1);
    double lo = S[i].t, hi = S[i + 1].t;
    const int sl = sign_of(S[i].z);
    while (hi - lo > opts.xtol_rel * std::max(1.0, std::abs(hi))) {
      const double m = 0.5 * (lo + hi);
      if (sign_of(q.value(m)) == sl)
        lo = m;
      else
        hi = m;
    }
    out.sigma.push_back(std::exp(0.5 * (lo + hi)));
  }
  if (int(out.sigma.size()) < n_max)
    throw BudgetError("only " + std::to_string(out.sigma.size()) +
                      " crossings found within the integration range");

  // (-1)^n z < 0 on (σ_n, σ_{n+1}); check at every sample between crossings.
  std::size_t n = 0;
  const double t_last = std::log(out.sigma.back());
  for (const auto& x : S) {
    if (x.t >= t_last) break;
    while (n < out.sigma.size() && x.t >= std::log(out.sigma[n])) ++n;
    if (x.z == 0) continue;
    const double sgn = n % 2 == 0 ? 1.0 : -1.0;
    if (!(sgn * x.z < 0)) {
      // Samples straddling a crossing can sit on either side within rounding.
      const bool near_crossing =
          (n > 0 && std::abs(x.t - std::log(out.sigma[n - 1])) < 1e-9) ||
          (n < out.sigma.size() && std::abs(x.t - std::log(out.sigma[n])) < 1e-9);
      if (!near_crossing) out.alternation_ok = false;
    }
  }
  return out;
}

GrowthTable intersection_growth(const ProblemSpec& spec, const std::vector<double>& zeta_grid,
                                double rho, const SingularOptions& opts,
                                const IntersectionOptions& iopts) {
  GrowthTable tab;
  const SingularSolution star = singular_extend(spec, rho, opts);
  if (!star.positive) throw PositivityError("singular solution is not positive on (0, rho]");
  const double theta = spec.table.theta;
  for (double zeta : zeta_grid) {
    const RadialSolution u = regular_solve(spec, zeta, rho, opts.solver);
    if (u.termination == Termination::StepFailure) throw SolverError(u.note);
    const double hi = u.r0 ? std::min(*u.r0, rho) : rho;
    const auto rep = count_intersections(u, star.solution, 0.0, hi, iopts);
    GrowthRow row{zeta, rep.count, {}, std::nan("")};
    for (const auto& c : rep.crossings) row.crossings.push_back(c.r);
    if (!row.crossings.empty()) row.first_scaled = row.crossings[0] * std::pow(zeta, 1 / theta);
    if (!tab.rows.empty() && row.count < tab.rows.back().count) tab.nondecreasing = false;
    tab.rows.push_back(row);
  }
  return tab;
}

}  // namespace radsing
