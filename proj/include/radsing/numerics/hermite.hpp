#pragma once

#include <cmath>

namespace radsing::numerics {

/// Quintic Hermite interpolant on [x0, x1] from values and first two derivatives.
template <class Scalar>
struct QuinticHermite {
  Scalar x0, h;
  Scalar c[6];

  QuinticHermite(Scalar x0_, Scalar x1, Scalar y0, Scalar d0, Scalar s0, Scalar y1, Scalar d1,
                 Scalar s1)
      : x0(x0_), h(x1 - x0_) {
    // Work in the unit variable s = (x - x0)/h.
    const Scalar D0 = d0 * h, D1 = d1 * h, S0 = s0 * h * h, S1 = s1 * h * h;
    c[0] = y0;
    c[1] = D0;
    c[2] = S0 / 2;
    const Scalar r0 = y1 - (c[0] + c[1] + c[2]);
    const Scalar r1 = D1 - (c[1] + 2 * c[2]);
    const Scalar r2 = S1 - 2 * c[2];
    c[3] = 10 * r0 - 4 * r1 + r2 / 2;
    c[4] = -15 * r0 + 7 * r1 - r2;
    c[5] = 6 * r0 - 3 * r1 + r2 / 2;
  }

  Scalar value(Scalar x) const {
    const Scalar s = (x - x0) / h;
    return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
  }

  Scalar derivative(Scalar x) const {
    const Scalar s = (x - x0) / h;
    return (c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])))) / h;
  }
};

/// Cubic Hermite value at the midpoint of an interval of width h.
template <class Scalar>
Scalar cubic_hermite_mid(Scalar y0, Scalar d0, Scalar y1, Scalar d1, Scalar h) {
  return Scalar(0.5) * (y0 + y1) + h * (d0 - d1) / Scalar(8);
}

}  // namespace radsing::numerics
