#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radsing/profiles.hpp"

namespace radsing {

enum class Termination { HitZero, ReachedRmax, StepFailure };

std::string to_string(Termination t);

struct Sample {
  double r, u, du;
};

/// u'' from the radial equation with the max{u,0}^p extension.
double radial_second_derivative(const ProblemSpec& spec, double r, double u, double du);

class RadialSolution {
 public:
  ProblemSpec spec;
  std::optional<double> zeta;  // empty for the singular solution
  std::vector<Sample> samples;
  Termination termination = Termination::ReachedRmax;
  std::optional<double> r0;  // first zero, also kept when integration continued past it
  double r_start = 0;
  double rtol = 0, atol = 0;
  std::string note;

  bool is_singular() const { return !zeta.has_value(); }
  double r_min() const { return samples.front().r; }
  double r_max() const { return samples.back().r; }
  bool covers(double lo, double hi) const;

  /// Builds interpolation data; call after the samples are complete.
  void finalize();

  double u(double r) const;
  double du(double r) const;
  /// Index i with samples[i].r <= r <= samples[i+1].r.
  std::size_t interval(double r) const;

 private:
  struct Piece {
    double kappa;  // local power-law exponent removed before interpolation; NaN for plain r
    double c[6];
  };
  std::vector<Piece> pieces_;
};

}  // namespace radsing
