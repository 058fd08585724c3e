#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace radsing::numerics {

template <class Scalar>
struct QuadResult {
  Scalar value{};
  Scalar abs_error{};
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

template <class Scalar>
struct Gk15 {
  static constexpr Scalar xgk[8] = {
      Scalar(0.991455371120812639206854697526329L), Scalar(0.949107912342758524526189684047851L),
      Scalar(0.864864423359769072789712788640926L), Scalar(0.741531185599394439863864773280788L),
      Scalar(0.586087235467691130294144845693013L), Scalar(0.405845151377397166906606412076961L),
      Scalar(0.207784955007898467600689403773245L), Scalar(0)};
  static constexpr Scalar wgk[8] = {
      Scalar(0.022935322010529224963732008058970L), Scalar(0.063092092629978553290700663189204L),
      Scalar(0.104790010322250183839876322541518L), Scalar(0.140653259715525918745189590510238L),
      Scalar(0.169004726639267902826583426598550L), Scalar(0.190350578064785409913256402421014L),
      Scalar(0.204432940075298892414161999234649L), Scalar(0.209482141084727828012999174891714L)};
  static constexpr Scalar wg[4] = {
      Scalar(0.129484966168869693270611432679082L), Scalar(0.279705391489276667901467771423780L),
      Scalar(0.381830050505118944950369775488975L), Scalar(0.417959183673469387755102040816327L)};
};

template <class Scalar>
struct Segment {
  Scalar a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class Scalar, class F>
Segment<Scalar> gk15(F& f, Scalar a, Scalar b) {
  using G = Gk15<Scalar>;
  const Scalar centre = Scalar(0.5) * (a + b);
  const Scalar half = Scalar(0.5) * (b - a);
  const Scalar fc = f(centre);
  Scalar resk = fc * G::wgk[7];
  Scalar resg = fc * G::wg[3];
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * G::xgk[j];
    const Scalar s = f(centre - dx) + f(centre + dx);
    resk += G::wgk[j] * s;
    if (j % 2 == 1) resg += G::wg[j / 2] * s;
  }
  using std::abs;
  return {a, b, resk * half, abs((resk - resg) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7,15) integration of f over [a, b].
template <class Scalar, class F>
QuadResult<Scalar> integrate_adaptive(F f, Scalar a, Scalar b, Scalar abs_tol, Scalar rel_tol,
                                      std::size_t max_segments = 2000) {
  using std::abs;
  QuadResult<Scalar> out;
  std::size_t evals = 0;
  auto counted = [&](Scalar x) {
    ++evals;
    return f(x);
  };
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment<Scalar>> heap;
  auto first = detail::gk15<Scalar>(counted, a, b);
  heap.push(first);
  Scalar total = first.value, err = first.error;
  while (err > std::max(abs_tol, rel_tol * abs(total)) && heap.size() < max_segments) {
    auto worst = heap.top();
    const Scalar mid = Scalar(0.5) * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
    heap.pop();
    auto left = detail::gk15<Scalar>(counted, worst.a, mid);
    auto right = detail::gk15<Scalar>(counted, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to avoid drift from the incremental updates.
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.abs_error = err;
  out.evaluations = evals;
  out.converged = err <= std::max(abs_tol, rel_tol * abs(total));
  return out;
}

/// Integral over [a, ∞) through x = a + s/(1-s), s in [0, 1).
template <class Scalar, class F>
QuadResult<Scalar> integrate_to_infinity(F f, Scalar a, Scalar abs_tol, Scalar rel_tol,
                                         std::size_t max_segments = 2000) {
  auto g = [&](Scalar s) {
    const Scalar one_m = Scalar(1) - s;
    if (one_m <= 0) return Scalar(0);
    const Scalar x = a + s / one_m;
    const Scalar v = f(x);
    return v == Scalar(0) ? Scalar(0) : v / (one_m * one_m);
  };
  return integrate_adaptive<Scalar>(g, Scalar(0), Scalar(1), abs_tol, rel_tol, max_segments);
}

/// Cumulative integral on a uniform grid: out[i] = ∫_{x_0}^{x_i} y, fourth-order accurate.
template <class Scalar>
std::vector<Scalar> cumulative_uniform(const std::vector<Scalar>& y, Scalar h) {
  const std::size_t n = y.size();
  std::vector<Scalar> out(n, Scalar(0));
  if (n < 2) return out;
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + h * Scalar(0.5) * (y[i - 1] + y[i]);
    return out;
  }
  for (std::size_t i = 1; i < n; ++i) {
    // Cubic through four neighbouring nodes, integrated over [x_{i-1}, x_i].
    Scalar piece;
    if (i == 1) {
      piece = h * (Scalar(9) * y[0] + Scalar(19) * y[1] - Scalar(5) * y[2] + y[3]) / Scalar(24);
    } else if (i == n - 1) {
      piece = h * (Scalar(9) * y[n - 1] + Scalar(19) * y[n - 2] - Scalar(5) * y[n - 3] + y[n - 4]) /
              Scalar(24);
    } else {
      piece = h * (-y[i - 2] + Scalar(13) * y[i - 1] + Scalar(13) * y[i] - y[i + 1]) / Scalar(24);
    }
    out[i] = out[i - 1] + piece;
  }
  return out;
}

}  // namespace radsing::numerics
