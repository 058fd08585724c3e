#include "radsing/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "radsing/errors.hpp"

namespace radsing {

namespace {

using V2 = numerics::Vec<double, 2>;
using numerics::OdeStatus;

enum class PhaseEnd { Completed, HitZero, Failed };

double positive_power(double x, double p) { return x > 0 ? std::pow(x, p) : 0.0; }

// (max{γ+z,0}/γ)^p - 1 without cancellation for small z.
double relative_power_excess(double z, double gamma, double p) {
  const double y = z / gamma;
  if (y <= -1.0) return -1.0;
  return std::expm1(p * std::log1p(y));
}

// Emden–Fowler phase. Two state forms share the variable t = log r:
//   U: (u, r u')       used while w = e^{θt}u is far below γ
//   Z: (w - γ, w')     used near the singular profile
struct TPhaseSystem {
  const ProblemSpec& spec;
  double a, Ap, gamma, gamma_p, theta, k0, p, mu, N;

  explicit TPhaseSystem(const ProblemSpec& s)
      : spec(s),
        a(s.table.a),
        Ap(s.table.A_pow()),
        gamma(s.table.gamma),
        gamma_p(std::pow(s.table.gamma, s.p)),
        theta(s.table.theta),
        k0(s.K.k0),
        p(s.p),
        mu(s.mu),
        N(s.N) {}

  V2 u_form(double t, const V2& y) const {
    const double r = std::exp(t);
    double src = r * r * spec.K.eval(r) * positive_power(y[0], p);
    if (mu != 0 && !spec.f.is_zero()) src += mu * r * r * spec.f.eval(r);
    return V2(y[1], (2 - N) * y[1] - src);
  }

  V2 z_form(double t, const V2& y) const {
    const auto c = emden_fowler_coeffs(spec, t);
    const double excess = relative_power_excess(y[0], gamma, p);
    return V2(y[1],
              -a * y[1] + Ap * y[0] + gamma_p * ((k0 - c.L) - c.L * excess) - mu * c.g);
  }

  // (w, w') from either form.
  std::pair<double, double> w_of(double t, const V2& y, bool z_mode) const {
    if (z_mode) return {gamma + y[0], y[1]};
    const double e = std::exp(theta * t);
    return {e * y[0], e * (theta * y[0] + y[1])};
  }
};

struct RPhaseSystem {
  const ProblemSpec& spec;
  double tt, N, p, mu;

  explicit RPhaseSystem(const ProblemSpec& s)
      : spec(s), tt(s.table.theta_tilde), N(s.N), p(s.p), mu(s.mu) {}

  // State (W, P) = (r^θ̃ u, r^{θ̃+1} u').
  V2 operator()(double r, const V2& y) const {
    const auto c = far_emden_fowler_coeffs(spec, std::log(r));
    const double W = y[0], P = y[1];
    return V2((tt * W + P) / r, ((tt + 2 - N) * P - c.L * positive_power(W, p) - mu * c.g) / r);
  }
};

struct TPhaseOutcome {
  PhaseEnd end;
  double t;
  V2 y;
  bool z_mode;
};

// Sink receives (t, w, w', z) at every accepted point.
template <class Sink>
TPhaseOutcome run_t_phase(const ProblemSpec& spec, double t0, V2 y, bool z_mode, double t1,
                          bool stop_at_zero, const SolverOptions& opts, Sink&& sink,
                          std::optional<double>& first_zero, std::string& note) {
  const TPhaseSystem sys(spec);
  const double gamma = sys.gamma, theta = sys.theta;
  const bool allow_switch = !z_mode && std::isfinite(gamma);
  double t = t0;
  while (t < t1) {
    numerics::OdeOptions<double> oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    oo.max_step = opts.t_max_step;
    oo.max_steps = opts.max_steps;
    numerics::OdeResult<double, 2> res;
    if (z_mode) {
      oo.event_tol = opts.atol * std::min(1.0, std::exp(theta * t));
      auto rhs = [&sys](double tt, const V2& s) { return sys.z_form(tt, s); };
      auto obs = [&](double tt, const V2& s, const V2&) {
        sink(tt, gamma + s[0], s[1], s[0]);
        return true;
      };
      auto ev = [gamma](double, const V2& s) { return gamma + s[0]; };
      res = numerics::integrate_dop853<double, 2>(rhs, t, y, t1, oo, obs, ev);
    } else {
      oo.event_tol = opts.atol * (allow_switch ? 0.5 * gamma : 1.0);
      auto rhs = [&sys](double tt, const V2& s) { return sys.u_form(tt, s); };
      auto obs = [&](double tt, const V2& s, const V2&) {
        const auto [w, dw] = sys.w_of(tt, s, false);
        sink(tt, w, dw, w - gamma);
        return true;
      };
      auto ev = [&sys, allow_switch](double tt, const V2& s) {
        if (!allow_switch) return s[0];
        return s[0] * (0.5 * sys.gamma - std::exp(sys.theta * tt) * s[0]);
      };
      res = numerics::integrate_dop853<double, 2>(rhs, t, y, t1, oo, obs, ev);
    }
    t = res.t;
    y = res.y;
    if (res.status == OdeStatus::Completed) break;
    if (res.status != OdeStatus::EventHit) {
      note = "step controller failed in Emden-Fowler phase at t=" + std::to_string(t) +
             (res.status == OdeStatus::MaxStepsExceeded ? " (step budget)" : " (step underflow)");
      return {PhaseEnd::Failed, t, y, z_mode};
    }
    if (!z_mode && allow_switch) {
      const double w = std::exp(theta * t) * y[0];
      if (std::abs(w - 0.5 * gamma) < std::abs(w)) {
        const auto [ww, dw] = sys.w_of(t, y, false);
        y = V2(ww - gamma, dw);
        z_mode = true;
        continue;
      }
    }
    if (!first_zero) first_zero = std::exp(t);
    if (stop_at_zero) return {PhaseEnd::HitZero, t, y, z_mode};
  }
  return {PhaseEnd::Completed, t, y, z_mode};
}

template <class Sink>
PhaseEnd run_r_phase(const ProblemSpec& spec, double r0, double u0, double du0, double r1,
                     bool stop_at_zero, const SolverOptions& opts, Sink&& sink,
                     std::optional<double>& first_zero, std::string& note) {
  const RPhaseSystem sys(spec);
  const double tt = spec.table.theta_tilde;
  double r = r0;
  V2 y(std::pow(r0, tt) * u0, std::pow(r0, tt + 1) * du0);
  while (r < r1) {
    numerics::OdeOptions<double> oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    oo.max_step_rel = opts.r_rel_step;
    oo.max_steps = opts.max_steps;
    oo.event_tol = opts.atol * std::pow(r, tt);
    auto obs = [&](double rr, const V2& s, const V2&) {
      sink(rr, s[0] * std::pow(rr, -tt), s[1] * std::pow(rr, -tt - 1));
      return true;
    };
    auto ev = [](double, const V2& s) { return s[0]; };
    auto res = numerics::integrate_dop853<double, 2>(sys, r, y, r1, oo, obs, ev);
    r = res.t;
    y = res.y;
    if (res.status == OdeStatus::Completed) break;
    if (res.status != OdeStatus::EventHit) {
      note = "step controller failed in radial phase";
      return PhaseEnd::Failed;
    }
    if (!first_zero) first_zero = r;
    if (stop_at_zero) return PhaseEnd::HitZero;
  }
  return PhaseEnd::Completed;
}

struct SampleSink {
  RadialSolution& sol;
  void add(double r, double u, double du) {
    if (!sol.samples.empty() && !(r > sol.samples.back().r)) return;
    sol.samples.push_back({r, u, du});
  }
};

void check_zeta(double zeta) {
  if (!(zeta > 0) || !std::isfinite(zeta)) throw DomainError("zeta must be positive and finite");
}

EmdenFowlerTrajectory run_trajectory(const ProblemSpec& spec, double t0, const V2& y0,
                                     bool z_mode, double t1, const SolverOptions& opts) {
  if (!(t0 < t1)) throw DomainError("integration interval must satisfy t0 < t1");
  EmdenFowlerTrajectory out;
  std::optional<double> zero;
  std::string note;
  auto sink = [&](double t, double w, double dw, double z) {
    if (!out.samples.empty() && !(t > out.samples.back().t)) return;
    out.samples.push_back({t, w, dw, z});
  };
  const auto end = run_t_phase(spec, t0, y0, z_mode, t1, false, opts, sink, zero, note);
  out.status = end.end == PhaseEnd::Failed ? OdeStatus::StepUnderflow : OdeStatus::Completed;
  return out;
}

}  // namespace

SeriesStart series_start(const ProblemSpec& spec, double zeta, const SolverOptions&) {
  check_zeta(zeta);
  const double N = spec.N, p = spec.p, alpha = spec.K.alpha, k0 = spec.K.k0;
  const double x_target = 1e-6;
  const double cK = k0 / ((2 + alpha) * (N + alpha));
  double r = std::pow(x_target / (cK * std::pow(zeta, p - 1)), 1.0 / (2 + alpha));
  r = std::min(r, 1e-3 * spec.K.scale());
  if (spec.K.kind == CoefficientKind::Tabulated) r = std::min(r, spec.K.table.r_first());
  double cf = 0;
  const double nu = spec.f.nu;
  if (spec.mu != 0 && !spec.f.is_zero()) {
    if (spec.f.kind == ForcingKind::CompactBump) r = std::min(r, 0.5 * spec.f.r1);
    if (spec.f.kind == ForcingKind::Tabulated) r = std::min(r, spec.f.table.r_first());
    const double f0 = spec.f.f0();
    if (f0 > 0) {
      cf = spec.mu * f0 / ((2 + nu) * (N + nu));
      r = std::min(r, std::pow(x_target * zeta / std::abs(cf), 1.0 / (2 + nu)));
    }
  }
  const double u = zeta - cK * std::pow(zeta, p) * std::pow(r, 2 + alpha) -
                   (cf != 0 ? cf * std::pow(r, 2 + nu) : 0.0);
  const double du = -cK * (2 + alpha) * std::pow(zeta, p) * std::pow(r, 1 + alpha) -
                    (cf != 0 ? cf * (2 + nu) * std::pow(r, 1 + nu) : 0.0);
  return {r, u, du};
}

namespace detail {

void shoot_from_r(const ProblemSpec& spec, double r0, double u0, double du0, double r_max,
                  const SolverOptions& opts, RadialSolution& sol) {
  SampleSink sink{sol};
  sink.add(r0, u0, du0);
  std::string note;
  const PhaseEnd end = run_r_phase(
      spec, r0, u0, du0, r_max, opts.stop_at_zero, opts,
      [&](double r, double u, double du) { sink.add(r, u, du); }, sol.r0, note);
  if (end == PhaseEnd::Failed) {
    sol.termination = Termination::StepFailure;
    sol.note = note;
  } else if (end == PhaseEnd::HitZero) {
    sol.termination = Termination::HitZero;
  } else {
    sol.termination = Termination::ReachedRmax;
  }
}

void shoot_from_t(const ProblemSpec& spec, double t0, double s0, double ds0, bool z_mode,
                  double r_max, const SolverOptions& opts, RadialSolution& sol) {
  const TPhaseSystem sys(spec);
  const double theta = sys.theta;
  SampleSink sink{sol};
  auto emit = [&](double t, double w, double dw, double) {
    sink.add(std::exp(t), w * std::exp(-theta * t), (dw - theta * w) * std::exp(-(theta + 1) * t));
  };
  const double t_switch = std::log(std::min(opts.r_switch, r_max));
  TPhaseOutcome out{PhaseEnd::Completed, t0, V2(s0, ds0), z_mode};
  {
    const auto [w, dw] = sys.w_of(t0, out.y, z_mode);
    emit(t0, w, dw, 0.0);
  }
  if (t0 < t_switch) {
    std::string note;
    out = run_t_phase(spec, t0, out.y, z_mode, t_switch, opts.stop_at_zero, opts, emit, sol.r0,
                      note);
    if (out.end == PhaseEnd::Failed) {
      sol.termination = Termination::StepFailure;
      sol.note = note;
      return;
    }
    if (out.end == PhaseEnd::HitZero) {
      sol.termination = Termination::HitZero;
      return;
    }
  }
  const double r_mid = std::exp(out.t);
  if (r_max <= r_mid * (1 + 1e-15)) {
    sol.termination = Termination::ReachedRmax;
    if (std::abs(sol.samples.back().r / r_max - 1) < 1e-12) sol.samples.back().r = r_max;
    return;
  }
  const auto [w, dw] = sys.w_of(out.t, out.y, out.z_mode);
  const double u = w * std::exp(-theta * out.t);
  const double du = (dw - theta * w) * std::exp(-(theta + 1) * out.t);
  shoot_from_r(spec, r_mid, u, du, r_max, opts, sol);
}

}  // namespace detail

RadialSolution regular_solve(const ProblemSpec& spec, double zeta, double r_max,
                             const SolverOptions& opts) {
  check_zeta(zeta);
  if (!(r_max > 0)) throw DomainError("r_max must be positive");
  const SeriesStart s = series_start(spec, zeta, opts);
  if (!(r_max > s.r)) throw DomainError("r_max lies below the series start radius");
  RadialSolution sol;
  sol.spec = spec;
  sol.zeta = zeta;
  sol.r_start = s.r;
  sol.rtol = opts.rtol;
  sol.atol = opts.atol;
  if (s.r < opts.r_switch)
    detail::shoot_from_t(spec, std::log(s.r), s.u, s.r * s.du, false, r_max, opts, sol);
  else
    detail::shoot_from_r(spec, s.r, s.u, s.du, r_max, opts, sol);
  sol.samples.front().r = s.r;
  sol.finalize();
  return sol;
}

EmdenFowlerTrajectory integrate_emden_fowler(const ProblemSpec& spec, double w0, double dw0,
                                             double t0, double t1, const SolverOptions& opts) {
  const double gamma = spec.table.gamma, theta = spec.table.theta;
  if (std::isfinite(gamma) && std::abs(w0 - gamma) < 0.5 * gamma)
    return run_trajectory(spec, t0, V2(w0 - gamma, dw0), true, t1, opts);
  const double e = std::exp(-theta * t0);
  return run_trajectory(spec, t0, V2(e * w0, e * (dw0 - theta * w0)), false, t1, opts);
}

EmdenFowlerTrajectory integrate_deviation(const ProblemSpec& spec, double z0, double dz0,
                                          double t0, double t1, const SolverOptions& opts) {
  return run_trajectory(spec, t0, V2(z0, dz0), true, t1, opts);
}

EmdenFowlerTrajectory regular_emden_fowler(const ProblemSpec& spec, double zeta, double t1,
                                           const SolverOptions& opts) {
  const SeriesStart s = series_start(spec, zeta, opts);
  return run_trajectory(spec, std::log(s.r), V2(s.u, s.r * s.du), false, t1, opts);
}

double deviation_second_derivative(const ProblemSpec& spec, double t, double z, double dz) {
  return TPhaseSystem(spec).z_form(t, V2(z, dz))[1];
}

FirstZero first_zero(const ProblemSpec& spec, double zeta, double r_max,
                     const SolverOptions& opts) {
  SolverOptions o = opts;
  o.stop_at_zero = true;
  const RadialSolution sol = regular_solve(spec, zeta, r_max, o);
  if (sol.termination == Termination::StepFailure) throw SolverError(sol.note);
  FirstZero fz;
  fz.r_max = r_max;
  if (sol.r0) {
    fz.found = true;
    fz.r0 = *sol.r0;
  }
  return fz;
}

}  // namespace radsing
