#pragma once

#include <vector>

#include "radsing/shooting.hpp"
#include "radsing/singular.hpp"

namespace radsing {

enum class CrossingConfidence { Refined, GridLevel };

struct Crossing {
  double r;
  CrossingConfidence confidence;
  int slope_sign;  // sign of (u_a - u_b)' at the crossing
};

struct IntersectionReport {
  double zeta = 0;  // ζ of the first solution, 0 when singular
  double r_lo = 0, rho = 0;
  int count = 0;
  std::vector<Crossing> crossings;
  std::vector<double> near_tangencies;  // radii where the difference dipped into the noise band
  bool degenerate = false;              // difference indistinguishable from 0 everywhere
  bool alternating = true;
};

struct IntersectionOptions {
  int points_per_decade = 64;
  double noise_factor = 10.0;  // band = noise_factor * atol * max(1, |u_a|, |u_b|)
};

/// Sign changes of u_a - u_b on (r_lo, r_hi). r_lo <= 0 means the later of the two start radii.
IntersectionReport count_intersections(const RadialSolution& a, const RadialSolution& b,
                                       double r_lo, double r_hi,
                                       const IntersectionOptions& opts = {});

struct SigmaSequence {
  std::vector<double> sigma;
  bool alternation_ok = true;
};

struct SigmaOptions {
  double rtol = 1e-12;
  double atol = 1e-30;
  double t_max = 60.0;
  double xtol_rel = 1e-12;
};

/// Radii where ū(σ,1) = γσ^{-θ} for the homogeneous problem with K = k0 r^α.
SigmaSequence sigma_sequence(int N, double p, double alpha, double k0, int n_max,
                             const SigmaOptions& opts = {});

struct GrowthRow {
  double zeta;
  int count;
  std::vector<double> crossings;
  double first_scaled;  // first crossing radius × ζ^{1/θ}, NaN without crossings
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  bool nondecreasing = true;
};

GrowthTable intersection_growth(const ProblemSpec& spec, const std::vector<double>& zeta_grid,
                                double rho, const SingularOptions& opts = {},
                                const IntersectionOptions& iopts = {});

}  // namespace radsing
