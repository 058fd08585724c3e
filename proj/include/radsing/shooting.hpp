#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "radsing/numerics/dop853.hpp"
#include "radsing/profiles.hpp"
#include "radsing/trajectory.hpp"

namespace radsing {

struct SolverOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_max_step = 0.05;  // Emden–Fowler phase
  double r_rel_step = 0.05;  // radial phase: step <= r_rel_step * r
  double r_switch = 1.0;     // t-variable below, r-variable above
  bool stop_at_zero = true;
  std::size_t max_steps = 2000000;
};

RadialSolution regular_solve(const ProblemSpec& spec, double zeta, double r_max,
                             const SolverOptions& opts = {});

struct EmdenFowlerSample {
  double t, w, dw;
  double z;  // w - γ, carried exactly while integrating the deviation
};

struct EmdenFowlerTrajectory {
  std::vector<EmdenFowlerSample> samples;
  numerics::OdeStatus status = numerics::OdeStatus::Completed;
};

/// w'' + a w' - A^{p-1} w + L(t) max{w,0}^p + μ g(t) = 0 on [t0, t1].
EmdenFowlerTrajectory integrate_emden_fowler(const ProblemSpec& spec, double w0, double dw0,
                                             double t0, double t1,
                                             const SolverOptions& opts = {});

/// Same equation written for z = w - γ, with z kept as the integrated state.
EmdenFowlerTrajectory integrate_deviation(const ProblemSpec& spec, double z0, double dz0,
                                          double t0, double t1, const SolverOptions& opts = {});

/// The regular solution u(·, ζ) in Emden–Fowler variables from its series start up to t1.
EmdenFowlerTrajectory regular_emden_fowler(const ProblemSpec& spec, double zeta, double t1,
                                           const SolverOptions& opts = {});

/// z'' for z = w - γ along the Emden–Fowler equation.
double deviation_second_derivative(const ProblemSpec& spec, double t, double z, double dz);

struct FirstZero {
  bool found = false;
  double r0 = 0;     // valid when found
  double r_max = 0;  // search limit otherwise
};

FirstZero first_zero(const ProblemSpec& spec, double zeta, double r_max,
                     const SolverOptions& opts = {});

/// Series start radius and initial data for u(·, ζ).
struct SeriesStart {
  double r, u, du;
};
SeriesStart series_start(const ProblemSpec& spec, double zeta, const SolverOptions& opts);

namespace detail {

/// Continues a trajectory from t0 = log r0 up to r_max, appending samples to sol. In z_mode
/// (s0, ds0) = (w - γ, w') with w = e^{θt}u; otherwise (s0, ds0) = (u, r u').
void shoot_from_t(const ProblemSpec& spec, double t0, double s0, double ds0, bool z_mode,
                  double r_max, const SolverOptions& opts, RadialSolution& sol);

/// Continues from radial data at r0 up to r_max.
void shoot_from_r(const ProblemSpec& spec, double r0, double u0, double du0, double r_max,
                  const SolverOptions& opts, RadialSolution& sol);

}  // namespace detail

}  // namespace radsing
