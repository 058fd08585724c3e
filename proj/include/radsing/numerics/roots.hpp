#pragma once

#include <cmath>
#include <functional>

namespace radsing::numerics {

struct RootResult {
  double lo, hi, root;
  int iterations;
};

/// Illinois-modified regula falsi with bisection safeguard; requires f(lo)·f(hi) ≤ 0.
template <class F>
RootResult illinois(F&& f, double lo, double hi, double flo, double fhi, double xtol,
                    int max_iter = 200) {
  int side = 0;
  int it = 0;
  for (; it < max_iter && std::abs(hi - lo) > xtol; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi)) || it % 4 == 3) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0) return {x, x, x, it + 1};
    if ((fx > 0) == (fhi > 0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  return {lo, hi, 0.5 * (lo + hi), it};
}

/// Plain bisection on a predicate that is true at lo and false at hi.
template <class P>
RootResult bisect_predicate(P&& pred, double lo, double hi, double xtol, int max_iter = 200) {
  int it = 0;
  for (; it < max_iter && std::abs(hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi, 0.5 * (lo + hi), it};
}

}  // namespace radsing::numerics
