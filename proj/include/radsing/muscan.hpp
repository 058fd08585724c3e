#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radsing/farfield.hpp"
#include "radsing/intersection.hpp"

namespace radsing {

enum class MuClass { FastDecay, SlowDecay, PositivityFailure, Undetermined };

std::string to_string(MuClass c);

struct MuClassification {
  double mu = 0;
  MuClass cls = MuClass::Undetermined;
  double eta = NAN;  // FastDecay
  double r0 = NAN;   // PositivityFailure
  std::optional<double> H;
  double xi = NAN;              // R1^{N-2} u*(R1)
  double flux_mismatch = NAN;   // R1^{N-1}|H| / ((N-2)η)
  double tail_r_max = 0;        // extent of u* used by the tail test
  double slow_ratio = NAN;      // r^{θ̃}u at r_max over its value a decade earlier
  std::string reason;
};

struct MuScanOptions {
  double R1 = 10.0;                                   // matching radius
  std::vector<double> tail_radii{1e3, 1e4, 1e5, 1e6};  // escalating extents for the tail test
  double fast_tol = 1e-3;                             // flux mismatch counted as a match
  double probe_radius = 10.0;                         // positivity probe: zero below this radius
  double probe_start = 1.0;
  int probe_doublings = 80;
  int coarse_points = 16;  // μ₁ bracketing grid on [0, μ_max]
  int threads = 0;
  SingularOptions singular;
  FarFieldOptions farfield;
};

/// Classifies μ using a quadrature grid shared across μ values.
class MuClassifier {
 public:
  MuClassifier(const ProblemSpec& spec, const MuScanOptions& opts = {});

  const ProblemSpec& spec() const { return spec_; }
  const MuScanOptions& options() const { return opts_; }
  MuClassification classify(double mu, std::optional<EtaWindow> window = {}) const;
  /// H with the PositivityFailure-before-R1 side mapped to -∞. NaN when undefined otherwise.
  double signed_mismatch(double mu) const;

 private:
  ProblemSpec spec_;
  MuScanOptions opts_;
  MatchingFunctions match_;
};

MuClassification classify_mu(const ProblemSpec& spec, double mu, const MuScanOptions& opts = {});

struct MuInterval {
  double lo, hi;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Smallest μ = probe_start·2^k whose singular solution vanishes below probe_radius.
double positivity_probe(const ProblemSpec& spec, const MuScanOptions& opts = {});

/// Boundary between SlowDecay and the first other class, bisected to width tol.
MuInterval find_mu1(const ProblemSpec& spec, double tol = 1e-3, const MuScanOptions& opts = {},
                    std::optional<double> mu_max = {});

struct FastRoot {
  MuInterval interval;
  double H_lo, H_hi;  // signed mismatch at the interval ends
};

struct FastRootScan {
  std::vector<FastRoot> roots;
  std::vector<MuInterval> skipped;  // grid cells where H could not be evaluated
  std::vector<double> grid, H;      // H is NaN where undefined, -inf below-R1 failure
};

/// Sign changes of H on grid_n + 1 uniform points of [mu_lo, mu_hi], bisected to machine width.
FastRootScan find_fast_roots(const ProblemSpec& spec, double mu_lo, double mu_hi, int grid_n,
                             const MuScanOptions& opts = {});

struct CensusRow {
  double zeta;
  bool positive;      // u(·,ζ) positive up to r_budget
  bool tail_settled;  // r^{θ̃}u settled over the last decade when positive
  double r0 = NAN;
  double r_end;  // right end of the counting interval
  int count;     // sign changes of u* - u(·,ζ) on (0, r_end)
  bool budget_exhausted = false;
  std::string note;
};

struct CensusIncrement {
  double zeta_lo, zeta_hi;
  int count_lo, count_hi;
};

struct CensusReport {
  double mu = 0, r_budget = 0;
  std::vector<CensusRow> rows;
  std::vector<CensusIncrement> increments;  // consecutive ζ with a higher count
  int total_increments = 0;                 // sum of count jumps
  int total_decrements = 0;                 // far crossings leaving (0, r_budget)
  int candidates = 0;                       // rows positive with a settled tail
};

CensusReport bounded_solution_census(const ProblemSpec& spec, const std::vector<double>& zeta_grid,
                                     double r_budget, const MuScanOptions& opts = {});

struct MuScanReport {
  std::vector<MuClassification> grid;
  EtaWindow window{0, 0};
  double mu_probe = 0, mu_max = 0;
  std::optional<MuInterval> mu1_estimate;
  std::string mu1_note;
  std::vector<double> H;  // signed mismatch per grid point
  std::vector<FastRoot> fast_roots;
  std::optional<MuInterval> mu_star_bracket;
  bool consistent = true;  // fast points isolated, class constant between them
};

/// Classification over grid_n + 1 points of [0, μ_max] (μ_max from the probe when unset).
MuScanReport scan_mu(const ProblemSpec& spec, int grid_n, double mu1_tol = 1e-3,
                     const MuScanOptions& opts = {}, std::optional<double> mu_max = {});

}  // namespace radsing
