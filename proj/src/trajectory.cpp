#include "radsing/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "radsing/errors.hpp"
#include "radsing/numerics/hermite.hpp"

namespace radsing {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::HitZero:
      return "hit_zero";
    case Termination::ReachedRmax:
      return "reached_rmax";
    case Termination::StepFailure:
      return "step_failure";
  }
  return "unknown";
}

double radial_second_derivative(const ProblemSpec& spec, double r, double u, double du) {
  const double up = u > 0 ? std::pow(u, spec.p) : 0.0;
  const double forcing = spec.mu == 0 || spec.f.is_zero() ? 0.0 : spec.mu * spec.f.eval(r);
  return -(spec.N - 1) / r * du - spec.K.eval(r) * up - forcing;
}

bool RadialSolution::covers(double lo, double hi) const {
  return !samples.empty() && r_min() <= lo && hi <= r_max();
}

void RadialSolution::finalize() {
  pieces_.clear();
  if (samples.size() < 2) return;
  pieces_.reserve(samples.size() - 1);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Sample& a = samples[i];
    const Sample& b = samples[i + 1];
    const double sa = radial_second_derivative(spec, a.r, a.u, a.du);
    const double sb = radial_second_derivative(spec, b.r, b.u, b.du);
    Piece piece;
    const double ka = a.u > 0 ? -a.r * a.du / a.u : NAN;
    const double kb = b.u > 0 ? -b.r * b.du / b.u : NAN;
    // Near a zero κ blows up; fall back to plain r there.
    if (std::abs(ka - kb) <= 0.5 + 0.5 * std::min(std::abs(ka), std::abs(kb))) {
      // v(s) = (r/r_a)^κ u(r), s = log(r/r_a).
      const double k = 0.5 * (ka + kb);
      const double h = std::log(b.r / a.r);
      const double ea = 1.0, eb = std::exp(k * h);
      auto vt = [&](double e, const Sample& s, double sec) {
        return std::array<double, 3>{e * s.u, e * (k * s.u + s.r * s.du),
                                     e * (k * k * s.u + (2 * k + 1) * s.r * s.du +
                                          s.r * s.r * sec)};
      };
      const auto va = vt(ea, a, sa), vb = vt(eb, b, sb);
      numerics::QuinticHermite<double> q(0.0, h, va[0], va[1], va[2], vb[0], vb[1], vb[2]);
      piece.kappa = k;
      std::copy(q.c, q.c + 6, piece.c);
    } else {
      numerics::QuinticHermite<double> q(a.r, b.r, a.u, a.du, sa, b.u, b.du, sb);
      piece.kappa = std::nan("");
      std::copy(q.c, q.c + 6, piece.c);
    }
    pieces_.push_back(piece);
  }
}

std::size_t RadialSolution::interval(double r) const {
  if (samples.size() < 2 || r < r_min() || r > r_max())
    throw CoverageError("radius " + std::to_string(r) + " outside trajectory range");
  auto it = std::upper_bound(samples.begin(), samples.end(), r,
                             [](double x, const Sample& s) { return x < s.r; });
  std::size_t i = std::size_t(it - samples.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, samples.size() - 2);
}

double RadialSolution::u(double r) const {
  const std::size_t i = interval(r);
  const Sample& a = samples[i];
  if (r == a.r) return a.u;
  if (r == samples[i + 1].r) return samples[i + 1].u;
  const Piece& pc = pieces_.at(i);
  const double* c = pc.c;
  if (std::isnan(pc.kappa)) {
    const double s = (r - a.r) / (samples[i + 1].r - a.r);
    return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
  }
  const double h = std::log(samples[i + 1].r / a.r);
  const double x = std::log(r / a.r);
  const double s = x / h;
  const double v = c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
  return std::exp(-pc.kappa * x) * v;
}

double RadialSolution::du(double r) const {
  const std::size_t i = interval(r);
  const Sample& a = samples[i];
  if (r == a.r) return a.du;
  if (r == samples[i + 1].r) return samples[i + 1].du;
  const Piece& pc = pieces_.at(i);
  const double* c = pc.c;
  if (std::isnan(pc.kappa)) {
    const double h = samples[i + 1].r - a.r;
    const double s = (r - a.r) / h;
    return (c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])))) / h;
  }
  const double h = std::log(samples[i + 1].r / a.r);
  const double x = std::log(r / a.r);
  const double s = x / h;
  const double v = c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
  const double dv = (c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])))) / h;
  return std::exp(-pc.kappa * x) * (dv - pc.kappa * v) / r;
}

}  // namespace radsing
