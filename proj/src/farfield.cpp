#include "radsing/farfield.hpp"

#include <algorithm>
#include <cmath>

#include "radsing/errors.hpp"
#include "radsing/numerics/dop853.hpp"
#include "radsing/numerics/quadrature.hpp"
#include "radsing/numerics/roots.hpp"

namespace radsing {

namespace {

// Six-point Lagrange interpolation of samples f on the uniform grid y_i = i h.
double lagrange_uniform(const std::vector<double>& f, double h, double y) {
  const int n = int(f.size());
  const int k = 6;
  int i0 = int(std::floor(y / h)) - k / 2 + 1;
  i0 = std::clamp(i0, 0, n - k);
  double sum = 0;
  for (int j = 0; j < k; ++j) {
    double lj = 1;
    const double yj = (i0 + j) * h;
    for (int l = 0; l < k; ++l)
      if (l != j) lj *= (y - (i0 + l) * h) / (yj - (i0 + l) * h);
    sum += lj * f[i0 + j];
  }
  return sum;
}

int grading_power(const ProblemSpec& spec) {
  const double s = (spec.p - 1) * spec.table.c_tilde;
  if (!(s > 0)) throw RegimeError("far-field integral equation needs p > (N+beta)/(N-2)");
  return std::max(1, int(std::ceil(4.0 / s)));
}

// Q(x_i)/max{ψ,0}^p in the y variable.
std::vector<double> nonlinear_weights(const ProblemSpec& spec, double R1, int M, int m,
                                      std::vector<double>* xs) {
  const double N = spec.N, p = spec.p, beta = spec.K.beta;
  const double EQ = beta + N + 1 - (N - 2) * p;
  std::vector<double> w(M + 1, 0.0);
  if (xs) xs->assign(M + 1, 0.0);
  const double h = 1.0 / M;
  for (int i = 1; i <= M; ++i) {
    const double y = i * h, x = std::pow(y, m), t = R1 / x;
    if (xs) (*xs)[i] = x;
    const double Lt = spec.K.scaled(t, beta);
    w[i] = Lt * std::pow(t, EQ) / R1 * m * std::pow(y, m - 1);
  }
  return w;
}

struct Kernel {
  std::vector<double> value;  // (P0 - x^{2-N} P1)/(N-2)
  std::vector<double> P0;
};

Kernel apply_kernel(const std::vector<double>& q, const std::vector<double>& x, double h, int N) {
  std::vector<double> q1(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) q1[i] = std::pow(x[i], N - 2) * q[i];
  Kernel k;
  k.P0 = numerics::cumulative_uniform(q, h);
  const auto P1 = numerics::cumulative_uniform(q1, h);
  k.value.assign(q.size(), 0.0);
  for (std::size_t i = 1; i < q.size(); ++i)
    k.value[i] = (k.P0[i] - std::pow(x[i], 2 - N) * P1[i]) / (N - 2);
  return k;
}

double lipschitz_of(const std::vector<double>& weight, const std::vector<double>& x,
                    const std::vector<double>& psi, double p, double h, int N) {
  std::vector<double> q(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    q[i] = weight[i] * p * (psi[i] > 0 ? std::pow(psi[i], p - 1) : 0.0);
  const auto k = apply_kernel(q, x, h, N);
  return *std::max_element(k.value.begin(), k.value.end());
}

}  // namespace

FarFieldGrid::FarFieldGrid(const ProblemSpec& spec, double R1, const FarFieldOptions& opts)
    : spec_(spec), R1_(R1) {
  if (!(R1 > 0)) throw DomainError("R1 must be positive");
  const int M = opts.intervals;
  m_ = grading_power(spec);
  h_ = 1.0 / M;
  const int m = int(m_);
  weight_ = nonlinear_weights(spec, R1, M, m, &x_);
  F0_.assign(M + 1, 0.0);
  F1_.assign(M + 1, 0.0);
  if (spec.f.is_zero()) return;
  const int N = spec.N;
  auto qf = [&](double y) {
    if (y <= 0) return 0.0;
    const double x = std::pow(y, m), t = R1 / x;
    const double f = spec.f.eval(t);
    if (f == 0) return 0.0;
    return std::pow(t, N - 1) * f * (t * t / R1) * m * std::pow(y, m - 1);
  };
  for (int i = 0; i < M; ++i) {
    const double a = i * h_, b = (i + 1) * h_;
    const auto r0 = numerics::integrate_adaptive<double>(qf, a, b, 1e-300, 1e-13, 400);
    const auto r1 = numerics::integrate_adaptive<double>(
        [&](double y) { return std::pow(y, m * (N - 2)) * qf(y); }, a, b, 1e-300, 1e-13, 400);
    F0_[i + 1] = F0_[i] + r0.value;
    F1_[i + 1] = F1_[i] + r1.value;
  }
}

double FarFieldSolution::interp(const std::vector<double>& f, double xx) const {
  const double y = std::pow(xx, 1.0 / grid_m);
  return lagrange_uniform(f, grid_h, y);
}

double FarFieldSolution::psi_at(double r) const {
  if (r < R1 * (1 - 1e-12)) throw CoverageError("far-field profile evaluated below R1");
  return interp(psi, std::min(1.0, R1 / r));
}

double FarFieldSolution::dv(double r) const {
  if (r < R1 * (1 - 1e-12)) throw CoverageError("far-field profile evaluated below R1");
  const double xx = std::min(1.0, R1 / r);
  const double flux = -(N - 2) * eta + interp(P0, xx) + mu * interp(PF0, xx);
  return flux * std::pow(r, 1 - N);
}

double FarFieldSolution::Xi() const {
  return (-(N - 2) * eta + P0.back() + mu * PF0.back()) * std::pow(R1, 1 - N);
}

std::vector<std::pair<double, double>> FarFieldSolution::samples() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = x.size(); i-- > 1;) {
    const double r = R1 / x[i];
    out.emplace_back(r, psi[i] * std::pow(r, 2 - N));
  }
  return out;
}

RadialSolution FarFieldSolution::to_radial(const ProblemSpec& spec, double r_max,
                                           int per_decade) const {
  RadialSolution sol;
  sol.spec = spec.with_mu(mu);
  sol.r_start = R1;
  sol.rtol = 1e-12;
  sol.atol = 1e-300;
  sol.note = "far-field profile";
  const int n = std::max(2, int(std::ceil(std::log10(r_max / R1) * per_decade)));
  for (int i = 0; i <= n; ++i) {
    const double r = R1 * std::pow(r_max / R1, double(i) / n);
    sol.samples.push_back({r, v(r), dv(r)});
  }
  sol.termination = Termination::ReachedRmax;
  sol.finalize();
  return sol;
}

FarFieldSolution fast_decay_solve(const FarFieldGrid& grid, double eta,
                                  const FarFieldOptions& opts) {
  return fast_decay_solve(grid, eta, grid.spec().mu, opts);
}

FarFieldSolution fast_decay_solve(const FarFieldGrid& grid, double eta, double mu,
                                  const FarFieldOptions& opts) {
  const ProblemSpec& spec = grid.spec();
  const int N = spec.N, n = grid.size();
  const double p = spec.p, h = grid.h();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = grid.x(i);

  std::vector<double> phiF(n, 0.0);
  for (int i = 1; i < n; ++i)
    phiF[i] = (grid.F0()[i] - std::pow(x[i], 2 - N) * grid.F1()[i]) / (N - 2);

  FarFieldSolution s;
  s.eta = eta;
  s.mu = mu;
  s.R1 = grid.R1();
  s.N = N;
  s.x = x;
  s.grid_h = h;
  s.grid_m = grid.m();
  s.psi.assign(n, eta);
  s.lipschitz_initial = lipschitz_of(grid.weight(), x, s.psi, p, h, N);

  std::vector<double> q(n);
  int bad = 0;
  Kernel k;
  for (int it = 0; it < opts.max_iter; ++it) {
    for (int i = 0; i < n; ++i)
      q[i] = grid.weight()[i] * (s.psi[i] > 0 ? std::pow(s.psi[i], p) : 0.0);
    k = apply_kernel(q, x, h, N);
    double res = 0, scale = std::abs(eta);
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
      next[i] = eta - mu * phiF[i] - k.value[i];
      res = std::max(res, std::abs(next[i] - s.psi[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    s.psi.swap(next);
    s.iterations = it + 1;
    if (!s.residuals.empty()) {
      const double prev = s.residuals.back();
      const double ratio = prev > 0 ? res / prev : 0.0;
      s.ratios.push_back(ratio);
      bad = ratio >= 1 ? bad + 1 : 0;
    }
    s.residuals.push_back(res);
    if (res <= opts.tol * scale) {
      s.converged = true;
      break;
    }
    if (bad >= 3) throw NoContraction("far-field Picard residual ratio >= 1 three times");
  }
  if (!s.converged) throw NoContraction("far-field Picard iteration did not converge");
  for (int i = 0; i < n; ++i)
    q[i] = grid.weight()[i] * (s.psi[i] > 0 ? std::pow(s.psi[i], p) : 0.0);
  s.P0 = apply_kernel(q, x, h, N).P0;
  s.PF0 = grid.F0();
  s.lipschitz = lipschitz_of(grid.weight(), x, s.psi, p, h, N);
  return s;
}

double select_R1(const ProblemSpec& spec, double eta_max, const FarFieldOptions& opts) {
  const int m = grading_power(spec);
  const int M = std::min(opts.intervals, 512);
  double R1 = opts.R1_initial;
  for (int k = 0; k <= opts.max_doublings; ++k, R1 *= 2) {
    std::vector<double> x;
    const auto w = nonlinear_weights(spec, R1, M, m, &x);
    const std::vector<double> psi(M + 1, eta_max);
    if (lipschitz_of(w, x, psi, spec.p, 1.0 / M, spec.N) < opts.lipschitz_target) return R1;
  }
  throw NoContraction("no R1 within the doubling budget makes J a contraction");
}

FarFieldSolution fast_decay_solve(const ProblemSpec& spec, double eta, double R1,
                                  const FarFieldOptions& opts) {
  if (!(eta > 0)) throw DomainError("eta must be positive");
  if (!(R1 > 0)) R1 = select_R1(spec, eta, opts);
  return fast_decay_solve(FarFieldGrid(spec, R1, opts), eta, opts);
}

double kelvin_exponent(int N, double p, double beta) { return (N - 2) * (p - 1) - 4 - beta; }

double HomogeneousFarProfile::v(double r) const {
  const double s = 1 / r;
  double vt;
  if (s < kelvin.r_min()) {
    const ProblemSpec& k = kelvin.spec;
    const double b = k.K.alpha, z = *kelvin.zeta;
    vt = z - k.K.k0 * std::pow(z, k.p) * std::pow(s, 2 + b) / ((2 + b) * (N + b));
  } else {
    vt = kelvin.u(s);
  }
  return std::pow(r, 2 - N) * vt;
}

double HomogeneousFarProfile::dv(double r) const {
  const double s = 1 / r;
  double vt, dvt;
  const ProblemSpec& k = kelvin.spec;
  if (s < kelvin.r_min()) {
    const double b = k.K.alpha, z = *kelvin.zeta;
    const double c = k.K.k0 * std::pow(z, k.p) / ((2 + b) * (N + b));
    vt = z - c * std::pow(s, 2 + b);
    dvt = -c * (2 + b) * std::pow(s, 1 + b);
  } else {
    vt = kelvin.u(s);
    dvt = kelvin.du(s);
  }
  return (2 - N) * std::pow(r, 1 - N) * vt - std::pow(r, -N) * dvt;
}

HomogeneousFarProfile homogeneous_far_profile(int N, double p, double beta, double k_inf,
                                              double eta, const SolverOptions& opts) {
  if (!(p > sobolev_exponent(N, beta)))
    throw RegimeError("homogeneous far profile requires p > p_S(beta)");
  const double bt = kelvin_exponent(N, p, beta);
  const ProblemSpec ks =
      make_problem(N, p, CoefficientProfile::pure_power(bt, k_inf), ForcingProfile::zero(), 0);
  SolverOptions o = opts;
  o.stop_at_zero = true;
  HomogeneousFarProfile out;
  out.N = N;
  out.kelvin = regular_solve(ks, eta, 1e8, o);
  if (!out.kelvin.r0) throw SolverError("Kelvin-transformed solution has no zero below 1e8");
  out.r_tilde = *out.kelvin.r0;
  out.r_bar = 1 / out.r_tilde;
  return out;
}

EtaEstimate eta_limit(const RadialSolution& sol, double r_ref) {
  EtaEstimate e;
  const ProblemSpec& spec = sol.spec;
  const int N = spec.N;
  const double tt = spec.table.theta_tilde;
  if (sol.r0 || sol.termination != Termination::ReachedRmax) {
    e.reason = "trajectory is not positive up to its end";
    return e;
  }
  const double rL = sol.r_max(), r10 = rL / 10;
  if (r10 < sol.r_min() || r_ref < sol.r_min() || r_ref > rL) {
    e.reason = "trajectory too short for tail tests";
    return e;
  }
  auto Phi = [&](double r) { return std::pow(r, N - 2) * sol.u(r); };
  double prev = -INFINITY;
  for (const Sample& s : sol.samples) {
    if (s.u <= 0) break;
    const double v = std::pow(s.r, N - 2) * s.u;
    if (v < prev * (1 - 1e-12)) e.monotone = false;
    prev = v;
  }
  const double phiL = Phi(rL), phi10 = Phi(r10), phiRef = Phi(r_ref);
  const double slow_ratio = std::pow(rL, tt) * sol.u(rL) / (std::pow(r10, tt) * sol.u(r10));
  if (phiL > 1e3 * phiRef && std::abs(slow_ratio - 1) < 0.01) {
    e.status = EtaStatus::SlowDecayDetected;
    e.reason = "r^{N-2}u grows while r^{theta~}u settles";
    return e;
  }
  if (std::abs(phiL / phi10 - 1) > 0.01) {
    e.reason = "r^{N-2}u has not settled over the last decade";
    return e;
  }
  e.eta_direct = phiL;
  const double p = spec.p, mu = spec.mu;
  auto tail = numerics::integrate_to_infinity<double>(
      [&](double s) {
        const double v = e.eta_direct * std::pow(s, 2 - N);
        double val = std::pow(s, N - 1) * spec.K.eval(s) * std::pow(v, p);
        if (mu != 0 && !spec.f.is_zero()) val += mu * std::pow(s, N - 1) * spec.f.eval(s);
        return val;
      },
      rL, 1e-300, 1e-12);
  e.eta_formula = (-std::pow(rL, N - 1) * sol.du(rL) + tail.value) / (N - 2);
  if (std::abs(e.eta_direct - e.eta_formula) > 0.01 * std::abs(e.eta_formula)) {
    e.reason = "direct and flux estimates of eta disagree by more than 1%";
    return e;
  }
  e.status = EtaStatus::Fast;
  e.eta = e.eta_formula;
  return e;
}

MatchingFunctions::MatchingFunctions(const ProblemSpec& spec, double R1,
                                     std::optional<EtaWindow> window, const FarFieldOptions& opts)
    : grid_(std::make_shared<FarFieldGrid>(spec, R1, opts)),
      window_(window),
      opts_(opts),
      mu_(spec.mu) {}

MatchingFunctions MatchingFunctions::at_mu(double mu, std::optional<EtaWindow> window) const {
  MatchingFunctions m = *this;
  m.mu_ = mu;
  m.window_ = window;
  return m;
}

FarFieldSolution MatchingFunctions::profile(double eta) const {
  return fast_decay_solve(*grid_, eta, mu_, opts_);
}

MatchingFunctions::Match MatchingFunctions::solve(
    double xi, std::optional<std::pair<double, double>> bracket) const {
  if (!(xi > 0)) throw WindowError("matching value xi must be positive");
  if (window_ && (xi < 0.5 * window_->lo || xi > 2 * window_->hi))
    throw WindowError("xi outside the eta window");
  int evals = 0;
  auto F = [&](double eta) {
    ++evals;
    return profile(eta).V() - xi;
  };
  double lo = bracket ? bracket->first : xi;
  double hi = bracket ? bracket->second : 1.5 * xi;
  double flo = F(lo);
  for (int k = 0; flo > 0; ++k) {
    if (k > 60) throw NotBracketed("no lower eta bracket for V(eta) = xi");
    hi = lo;
    lo *= 0.5;
    flo = F(lo);
  }
  double fhi = F(hi);
  for (int k = 0; fhi < 0; ++k) {
    if (k > 60) throw NotBracketed("no upper eta bracket for V(eta) = xi");
    lo = hi;
    flo = fhi;
    hi *= 2;
    fhi = F(hi);
  }
  const auto root = numerics::illinois(F, lo, hi, flo, fhi, 1e-14 * hi);
  const FarFieldSolution s = profile(root.root);
  return {root.root, s.Xi(), s.V(), evals + 1};
}

MatchResult matching_Xi(const ProblemSpec& spec, double R1, double xi,
                        std::optional<EtaWindow> window, const FarFieldOptions& opts) {
  const MatchingFunctions mf(spec, R1, window, opts);
  const auto m = mf.solve(xi);
  return {m.eta, m.Xi};
}

Mismatch mismatch_H(const MatchingFunctions& match, const RadialSolution& u_star, double mu) {
  const double R1 = match.R1();
  if ((u_star.r0 && *u_star.r0 <= R1) || !u_star.covers(R1, R1))
    throw PositivityError("singular solution does not stay positive up to R1");
  Mismatch m;
  m.mu = mu;
  m.R1 = R1;
  m.u_R1 = u_star.u(R1);
  m.du_R1 = u_star.du(R1);
  if (!(m.u_R1 > 0)) throw PositivityError("singular solution is not positive at R1");
  m.xi = std::pow(R1, u_star.spec.N - 2) * m.u_R1;
  const auto r = match.at_mu(mu, match.window()).solve(m.xi);
  m.eta = r.eta;
  m.Xi = r.Xi;
  m.H = m.du_R1 - m.Xi;
  return m;
}

Mismatch mismatch_H(const ProblemSpec& spec, double mu, double R1,
                    std::optional<EtaWindow> window, const SingularOptions& sopts,
                    const FarFieldOptions& fopts) {
  const ProblemSpec s = spec.with_mu(mu);
  const SingularSolution star = singular_extend(s, R1 * 1.01, sopts);
  const MatchingFunctions mf(s, R1, window, fopts);
  return mismatch_H(mf, star.solution, mu);
}

EnergyReport slow_decay_energy(const RadialSolution& sol, double t0, double t1, double dt) {
  const ProblemSpec& spec = sol.spec;
  const auto& tab = spec.table;
  const double tt = tab.theta_tilde, at = tab.a_tilde, Ap = tab.A_tilde_pow();
  const double kinf = spec.K.k_inf, p = spec.p, mu = spec.mu;
  using V2 = numerics::Vec<double, 2>;
  auto rhs = [&](double t, const V2& y) {
    const auto c = far_emden_fowler_coeffs(spec, t);
    const double wp = y[0] > 0 ? std::pow(y[0], p) : 0.0;
    return V2(y[1], -at * y[1] + Ap * y[0] - c.L * wp - mu * c.g);
  };
  const double r0 = std::exp(t0);
  V2 y(std::pow(r0, tt) * sol.u(r0), std::pow(r0, tt) * (tt * sol.u(r0) + r0 * sol.du(r0)));
  const int n = int(std::round((t1 - t0) / dt));
  EnergyReport rep;
  numerics::OdeOptions<double> oo;
  oo.rtol = 1e-13;
  oo.atol = 1e-15;
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + i * dt;
    if (i > 0) {
      auto res = numerics::integrate_dop853<double, 2>(rhs, t - dt, y, t, oo,
                                                       [](double, const V2&, const V2&) {
                                                         return true;
                                                       });
      y = res.y;
    }
    rep.t.push_back(t);
    rep.w.push_back(y[0]);
    rep.dw.push_back(y[1]);
    const double wpos = std::max(y[0], 0.0);
    rep.E.push_back(0.5 * y[1] * y[1] - 0.5 * Ap * y[0] * y[0] +
                    kinf / (p + 1) * std::pow(wpos, p + 1));
  }
  for (int i = 3; i + 3 <= n; ++i) {
    const auto& E = rep.E;
    const double dE = (-E[i - 3] + 9 * E[i - 2] - 45 * E[i - 1] + 45 * E[i + 1] - 9 * E[i + 2] +
                       E[i + 3]) /
                      (60 * dt);
    const auto c = far_emden_fowler_coeffs(spec, rep.t[i]);
    const double w = rep.w[i], dw = rep.dw[i];
    const double wp = w > 0 ? std::pow(w, p) : 0.0;
    const double diss = -at * dw * dw, dK = dw * (kinf - c.L) * wp, df = -dw * mu * c.g;
    rep.dE_measured.push_back(dE);
    rep.dE_dissipation.push_back(diss);
    rep.drift_K.push_back(dK);
    rep.drift_f.push_back(df);
    rep.max_identity_error = std::max(rep.max_identity_error, std::abs(dE - (diss + dK + df)));
    rep.max_homogeneous_gap = std::max(rep.max_homogeneous_gap, std::abs(dE - diss));
    rep.scale = std::max(rep.scale, std::abs(dE));
  }
  for (int i = 1; i <= n; ++i)
    if (rep.E[i] > rep.E[i - 1] + 1e-12 * std::max(1.0, std::abs(rep.E[i]))) rep.nonincreasing = false;
  return rep;
}

}  // namespace radsing
