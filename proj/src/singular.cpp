#include "radsing/singular.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

#include "radsing/errors.hpp"
#include "radsing/numerics/hermite.hpp"
#include "radsing/numerics/quadrature.hpp"

namespace radsing {

namespace {

using cd = std::complex<double>;

void require_supercritical(const ProblemSpec& spec) {
  if (!(spec.table.a > 0))
    throw RegimeError("singular construction requires p > p_S(alpha) (a > 0)");
}

double forcing_h(const ProblemSpec& spec, double t, double gamma_p) {
  if (t < -700) return 0.0;  // e^t underflows; the forcing has vanished long before
  const auto c = emden_fowler_coeffs(spec, t);
  return gamma_p * (spec.K.k0 - c.L) - spec.mu * c.g;
}

// Full right-hand side H(t, z) of z'' + a z' + (p-1)A^{p-1} z = H.
double picard_rhs(const ProblemSpec& spec, double t, double z, double gamma, double gamma_p) {
  const auto c = emden_fowler_coeffs(spec, t);
  const double y = z / gamma;
  const double p = spec.p, k0 = spec.K.k0;
  double power;   // (1+y)^p, clipped at zero
  double excess;  // (1+y)^p - 1 - p y
  if (y <= -1) {
    power = 0;
    excess = -1 - p * y;
  } else {
    const double e = std::expm1(p * std::log1p(y));
    power = 1 + e;
    excess = e - p * y;
  }
  return gamma_p * (-k0 * excess + (k0 - c.L) * power) - spec.mu * c.g;
}

}  // namespace

std::pair<cd, cd> characteristic_roots(const ExponentTable& t) {
  const double a = t.a, b = (t.p - 1) * t.A_pow();
  const cd disc = std::sqrt(cd(a * a - 4 * b, 0));
  const cd l1 = 0.5 * (-a + disc), l2 = 0.5 * (-a - disc);
  return l1.real() >= l2.real() ? std::pair{l1, l2} : std::pair{l2, l1};
}

std::pair<double, double> resolvent_warm_start(const ProblemSpec& spec, double t) {
  const bool homogeneous =
      spec.K.kind == CoefficientKind::PurePower && (spec.mu == 0 || spec.f.is_zero());
  if (homogeneous) return {0.0, 0.0};
  const auto [l1, l2] = characteristic_roots(spec.table);
  const double gamma_p = std::pow(spec.table.gamma, spec.p);
  const bool repeated = std::abs(l1 - l2) < 1e-12 * std::abs(l1);
  auto G = [&](double tau) {
    if (repeated) return tau * std::exp(l1.real() * tau);
    return ((std::exp(l1 * tau) - std::exp(l2 * tau)) / (l1 - l2)).real();
  };
  auto dG = [&](double tau) {
    if (repeated) return (1 + l1.real() * tau) * std::exp(l1.real() * tau);
    return ((l1 * std::exp(l1 * tau) - l2 * std::exp(l2 * tau)) / (l1 - l2)).real();
  };
  auto h = [&](double tau) { return forcing_h(spec, t - tau, gamma_p); };
  const double h_scale = std::abs(h(0.0)) + 1e-300;
  const auto zp = numerics::integrate_to_infinity<double>(
      [&](double tau) { return G(tau) * h(tau); }, 0.0, 1e-16 * h_scale, 1e-12);
  const auto dzp = numerics::integrate_to_infinity<double>(
      [&](double tau) { return dG(tau) * h(tau); }, 0.0, 1e-16 * h_scale, 1e-12);
  return {zp.value, dzp.value};
}

EmdenFowlerTrajectory singular_local(const ProblemSpec& spec, double t_start, double t_end,
                                     const SolverOptions& opts) {
  require_supercritical(spec);
  if (!(t_start < t_end)) throw DomainError("singular_local needs t_start < t_end");
  const auto [z0, dz0] = resolvent_warm_start(spec, t_start);
  return integrate_deviation(spec, z0, dz0, t_start, t_end, opts);
}

PicardResult picard_singular_oracle(const ProblemSpec& spec, double t_end, int max_iter,
                                    const PicardOptions& opts) {
  require_supercritical(spec);
  const auto& tab = spec.table;
  const double gamma = tab.gamma, gamma_p = std::pow(gamma, spec.p);
  const int n = std::max(2, int(std::ceil((t_end - opts.t_lo) / opts.dt)));
  const double dt = (t_end - opts.t_lo) / n;

  Eigen::Matrix2d M;
  M << 0, 1, -(spec.p - 1) * tab.A_pow(), -tab.a;
  const Eigen::Matrix2d E = (M * dt).exp();
  const Eigen::Matrix2d Eh = (M * (0.5 * dt)).exp();
  const Eigen::Vector2d e2(0, 1);
  const Eigen::Vector2d E_e2 = E * e2, Eh_e2 = Eh * e2;

  PicardResult out;
  out.t.resize(n + 1);
  for (int i = 0; i <= n; ++i) out.t[i] = opts.t_lo + i * dt;
  out.t[n] = t_end;
  out.z.assign(n + 1, 0.0);
  out.dz.assign(n + 1, 0.0);

  std::vector<double> z_new(n + 1), dz_new(n + 1);
  int bad = 0;
  for (int k = 0; k < max_iter; ++k) {
    Eigen::Vector2d Y(0, 0);
    z_new[0] = 0;
    dz_new[0] = 0;
    double H_left = picard_rhs(spec, out.t[0], out.z[0], gamma, gamma_p);
    for (int i = 0; i < n; ++i) {
      const double zm = numerics::cubic_hermite_mid(out.z[i], out.dz[i], out.z[i + 1],
                                                    out.dz[i + 1], dt);
      const double Hm = picard_rhs(spec, out.t[i] + 0.5 * dt, zm, gamma, gamma_p);
      const double Hr = picard_rhs(spec, out.t[i + 1], out.z[i + 1], gamma, gamma_p);
      Y = E * Y + (dt / 6) * (H_left * E_e2 + 4 * Hm * Eh_e2 + Hr * e2);
      z_new[i + 1] = Y[0];
      dz_new[i + 1] = Y[1];
      H_left = Hr;
    }
    double res = 0, zmax = 0;
    for (int i = 0; i <= n; ++i) {
      res = std::max(res, std::abs(z_new[i] - out.z[i]));
      zmax = std::max(zmax, std::abs(z_new[i]));
    }
    out.z.swap(z_new);
    out.dz.swap(dz_new);
    out.iterations = k + 1;
    if (!out.residuals.empty()) {
      const double prev = out.residuals.back();
      const double ratio = prev > 0 ? res / prev : 0.0;
      out.ratios.push_back(ratio);
      bad = ratio >= 1 ? bad + 1 : 0;
    }
    out.residuals.push_back(res);
    if (res <= opts.tol * std::max(1.0, zmax)) {
      out.converged = true;
      return out;
    }
    if (bad >= 3) throw NoContraction("Picard residual ratio >= 1 for 3 consecutive iterations");
  }
  return out;
}

namespace {

SingularSolution construct_at(const ProblemSpec& spec, double t_start, double r_max,
                              const SolverOptions& solver) {
  SingularSolution s;
  s.t_start = t_start;
  s.r_max = r_max;
  RadialSolution& sol = s.solution;
  sol.spec = spec;
  sol.zeta.reset();
  sol.r_start = std::exp(t_start);
  sol.rtol = solver.rtol;
  sol.atol = solver.atol;
  const auto [z0, dz0] = resolvent_warm_start(spec, t_start);
  detail::shoot_from_t(spec, t_start, z0, dz0, true, r_max, solver, sol);
  sol.finalize();
  if (sol.termination == Termination::StepFailure) throw SolverError(sol.note);
  s.positive = !sol.r0.has_value();
  if (sol.r0) s.r_fail = *sol.r0;
  return s;
}

double reference_value(const SingularSolution& s, double r_ref) {
  return s.solution.u(std::min(r_ref, s.solution.r_max()));
}

}  // namespace

SingularSolution singular_extend(const ProblemSpec& spec, double r_max,
                                 const SingularOptions& opts) {
  require_supercritical(spec);
  if (!(r_max > std::exp(opts.t_start))) throw DomainError("r_max below singular start radius");
  double t0 = opts.t_start;
  SingularSolution s = construct_at(spec, t0, r_max, opts.solver);
  if (!opts.richardson) return s;
  const double r_ref = 1.0;
  while (true) {
    const double t1 = t0 - opts.deepen_step;
    SingularSolution deeper = construct_at(spec, t1, r_max, opts.solver);
    // Stay clear of a first zero, where relative changes mean nothing.
    const double ref =
        std::min({r_ref, 0.5 * s.solution.r_max(), 0.5 * deeper.solution.r_max()});
    const double a = reference_value(s, ref), b = reference_value(deeper, ref);
    const double delta = std::abs(a - b) / std::max(std::abs(b), opts.solver.atol);
    deeper.richardson_delta = delta;
    deeper.r_ref = ref;
    if (delta <= opts.richardson_tol) {
      s.richardson_delta = delta;
      s.r_ref = ref;
      return s;
    }
    if (t1 - opts.deepen_step < opts.t_floor)
      throw BudgetError("singular start could not be deepened to meet the Richardson check");
    s = std::move(deeper);
    t0 = t1;
  }
}

ConvergenceTable convergence_to_singular(const ProblemSpec& spec,
                                         const std::vector<double>& zeta_list,
                                         const std::vector<double>& r_probes,
                                         const SingularOptions& opts) {
  ConvergenceTable tab;
  if (r_probes.empty()) return tab;
  const double r_hi = *std::max_element(r_probes.begin(), r_probes.end());
  const SingularSolution star = singular_extend(spec, r_hi, opts);
  for (double zeta : zeta_list) {
    ConvergenceRow row{zeta, 0, 0};
    const RadialSolution u = regular_solve(spec, zeta, r_hi, opts.solver);
    for (double r : r_probes) {
      if (!u.covers(r, r) || !star.solution.covers(r, r))
        throw CoverageError("probe radius not covered by both trajectories");
      row.sup_du = std::max(row.sup_du, std::abs(u.u(r) - star.solution.u(r)));
      row.sup_ddu = std::max(row.sup_ddu, std::abs(u.du(r) - star.solution.du(r)));
    }
    if (!tab.rows.empty() && !(row.sup_du < tab.rows.back().sup_du)) tab.decreasing = false;
    tab.rows.push_back(row);
  }
  return tab;
}

double closeness_sup(const RadialSolution& regular, const RadialSolution& singular, double sigma,
                     double rho, int points_per_decade) {
  const ProblemSpec& spec = regular.spec;
  const double theta = spec.table.theta, gamma = spec.table.gamma;
  const double lo = sigma * std::pow(*regular.zeta, -1.0 / theta);
  if (!(lo < rho)) return 0.0;
  const int n = std::max(2, int(std::ceil(std::log10(rho / lo) * points_per_decade)));
  double sup = 0;
  for (int i = 0; i <= n; ++i) {
    const double r = lo * std::pow(rho / lo, double(i) / n);
    sup = std::max(sup, std::pow(r, theta) * std::abs(regular.u(r) - singular.u(r)) / gamma);
  }
  return sup;
}

}  // namespace radsing
