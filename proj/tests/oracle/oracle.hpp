#pragma once

// Independent reference integrators in long double. Classical RK4 with steps proportional to r,
// no adaptivity, no shared code with the library.

#include <cmath>
#include <vector>

namespace oracle {

using ld = long double;

/// u'' + (N-1)/r u' + r^s max(u,0)^p = 0, u(0) = u0, u'(0) = 0.
struct Radial {
  int N;
  ld p, s, u0;

  ld rhs(ld r, ld u, ld du) const {
    const ld up = u > 0 ? std::pow(u, p) : 0;
    return -(N - 1) / r * du - std::pow(r, s) * up;
  }
};

struct State {
  ld r, u, du;
};

/// Two-term series at small r.
inline State series(const Radial& q, ld r) {
  const ld k = q.s + 2;
  const ld c1 = std::pow(q.u0, q.p) / (k * (k + q.N - 2));
  return {r, q.u0 - c1 * std::pow(r, k), -c1 * k * std::pow(r, k - 1)};
}

inline State rk4_step(const Radial& q, State y, ld h) {
  auto f = [&](ld r, ld u, ld du, ld& a, ld& b) {
    a = du;
    b = q.rhs(r, u, du);
  };
  ld k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  f(y.r, y.u, y.du, k1u, k1v);
  f(y.r + h / 2, y.u + h / 2 * k1u, y.du + h / 2 * k1v, k2u, k2v);
  f(y.r + h / 2, y.u + h / 2 * k2u, y.du + h / 2 * k2v, k3u, k3v);
  f(y.r + h, y.u + h * k3u, y.du + h * k3v, k4u, k4v);
  return {y.r + h, y.u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u),
          y.du + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)};
}

/// Integrates to each target radius (increasing), calling on_step(prev, next) after every step.
template <class OnStep>
inline State integrate(const Radial& q, ld r_end, ld rel_step, OnStep&& on_step, ld r_start = 1e-3L) {
  State y = series(q, r_start);
  while (y.r < r_end) {
    const ld h = std::min(rel_step * std::max(y.r, ld(0.05)), r_end - y.r);
    const State n = rk4_step(q, y, h);
    if (!on_step(y, n)) return n;
    y = n;
  }
  return y;
}

inline State integrate_to(const Radial& q, ld r_end, ld rel_step = 2e-4L) {
  return integrate(q, r_end, rel_step, [](const State&, const State&) { return true; });
}

/// Cubic Hermite root of g(r) = u(r) - c r^{-e} on [a.r, b.r], refined by bisection.
inline ld hermite_root(const State& a, const State& b, ld c, ld e) {
  auto g = [&](ld r) {
    const ld h = b.r - a.r, t = (r - a.r) / h;
    const ld h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
    const ld h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
    const ld u = h00 * a.u + h10 * h * a.du + h01 * b.u + h11 * h * b.du;
    return u - c * std::pow(r, -e);
  };
  ld lo = a.r, hi = b.r, glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-30L; ++i) {
    const ld m = (lo + hi) / 2, gm = g(m);
    if ((gm > 0) == (glo > 0)) {
      lo = m;
      glo = gm;
    } else {
      hi = m;
    }
  }
  return (lo + hi) / 2;
}

/// Radii where u(·) crosses c r^{-e}, up to r_end.
inline std::vector<ld> crossings(const Radial& q, ld c, ld e, ld r_end, ld rel_step = 2e-4L) {
  std::vector<ld> out;
  integrate(q, r_end, rel_step, [&](const State& a, const State& b) {
    const ld ga = a.u - c * std::pow(a.r, -e), gb = b.u - c * std::pow(b.r, -e);
    if ((ga > 0) != (gb > 0)) out.push_back(hermite_root(a, b, c, e));
    return true;
  });
  return out;
}

/// First zero of u, or -1 when none before r_end.
inline ld first_zero(const Radial& q, ld r_end, ld rel_step = 2e-4L) {
  ld r0 = -1;
  integrate(q, r_end, rel_step, [&](const State& a, const State& b) {
    if (b.u <= 0) {
      r0 = hermite_root(a, b, 0, 0);
      return false;
    }
    return true;
  });
  return r0;
}

/// Joseph-Lundgren exponent for N > 10 + 4α, evaluated in long double.
inline ld p_JL(int N, ld alpha) {
  const ld a2 = alpha + 2;
  return ((N - 2) * (N - 2) - 2 * a2 * (alpha + N) + 2 * std::sqrt(a2 * a2 * a2 * (alpha + 2 * N - 2))) /
         ((N - 2) * (N - 10 - 4 * alpha));
}

}  // namespace oracle
