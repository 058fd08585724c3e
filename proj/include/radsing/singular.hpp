#pragma once

#include <complex>
#include <vector>

#include "radsing/shooting.hpp"

namespace radsing {

enum class Construction { ForwardIntegration, PicardOracle };

struct SingularOptions {
  SolverOptions solver;
  double t_start = -30.0;
  double richardson_tol = 1e-8;
  double deepen_step = 10.0;
  double t_floor = -200.0;
  bool richardson = true;
};

struct SingularSolution {
  RadialSolution solution;
  double t_start = 0;
  Construction construction = Construction::ForwardIntegration;
  bool positive = true;     // PositiveUpTo(r_max) when true, FailsAt(r0) otherwise
  double r_fail = 0;        // first zero when !positive
  double r_max = 0;
  double richardson_delta = 0;  // relative change of u*(r_ref) under deepening
  double r_ref = 1;
};

/// Roots of λ² + aλ + (p-1)A^{p-1} = 0, larger real part first.
std::pair<std::complex<double>, std::complex<double>> characteristic_roots(
    const ExponentTable& table);

/// Decaying resolvent response (z_p, z_p') at t to the forcing (k0 - L)γ^p - μg.
std::pair<double, double> resolvent_warm_start(const ProblemSpec& spec, double t);

EmdenFowlerTrajectory singular_local(const ProblemSpec& spec, double t_start, double t_end,
                                     const SolverOptions& opts = {});

struct PicardResult {
  std::vector<double> t, z, dz;
  std::vector<double> residuals;  // sup |z_{k+1} - z_k|
  std::vector<double> ratios;
  int iterations = 0;
  bool converged = false;
};

struct PicardOptions {
  double t_lo = -60.0;
  double dt = 0.005;
  double tol = 1e-14;
};

PicardResult picard_singular_oracle(const ProblemSpec& spec, double t_end, int max_iter,
                                    const PicardOptions& opts = {});

SingularSolution singular_extend(const ProblemSpec& spec, double r_max,
                                 const SingularOptions& opts = {});

struct ConvergenceRow {
  double zeta;
  double sup_du;   // max |u(r,ζ) - u*(r)| over probes
  double sup_ddu;  // max |u_r(r,ζ) - u*'(r)| over probes
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool decreasing = true;
};

ConvergenceTable convergence_to_singular(const ProblemSpec& spec,
                                         const std::vector<double>& zeta_list,
                                         const std::vector<double>& r_probes,
                                         const SingularOptions& opts = {});

/// sup over r in [σζ^{-1/θ}, ρ] of r^θ|u(r,ζ) - u*(r)|/γ.
double closeness_sup(const RadialSolution& regular, const RadialSolution& singular, double sigma,
                     double rho, int points_per_decade = 200);

}  // namespace radsing
