#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radsing/singular.hpp"

namespace radsing {

struct FarFieldOptions {
  int intervals = 2048;
  double R1_initial = 10.0;
  int max_doublings = 16;
  double lipschitz_target = 1.0 / 3.0;
  int max_iter = 200;
  double tol = 1e-14;
};

/// Quadrature data on the substituted variable x = R1/t = y^m, y uniform on [0, 1].
class FarFieldGrid {
 public:
  FarFieldGrid(const ProblemSpec& spec, double R1, const FarFieldOptions& opts);

  const ProblemSpec& spec() const { return spec_; }
  double R1() const { return R1_; }
  int size() const { return int(x_.size()); }
  double x(int i) const { return x_[i]; }
  double h() const { return h_; }
  double m() const { return m_; }
  // Cumulative ∫_0^x of t^{N-1} f(t) dt/dx·(1, x^{N-2}) in the y variable.
  const std::vector<double>& F0() const { return F0_; }
  const std::vector<double>& F1() const { return F1_; }
  // Weight ω_i with Q(x_i) = ω_i · max{ψ_i,0}^p · dx/dy.
  const std::vector<double>& weight() const { return weight_; }

 private:
  ProblemSpec spec_;
  double R1_, h_, m_;
  std::vector<double> x_, weight_, F0_, F1_;
};

class FarFieldSolution {
 public:
  double eta = 0, mu = 0, R1 = 0;
  int N = 0;
  std::vector<double> x, psi;  // ψ = r^{N-2} v at r = R1/x
  std::vector<double> P0;      // ∫_0^x Q (nonlinear part), used for v'
  std::vector<double> PF0;     // ∫_0^x Q_F
  std::vector<double> residuals, ratios;
  double lipschitz = 0;  // measured Lipschitz constant of J at the solution
  double lipschitz_initial = 0;
  int iterations = 0;
  bool converged = false;
  double grid_h = 0, grid_m = 1;

  double psi_at(double r) const;
  double v(double r) const { return psi_at(r) * std::pow(r, 2 - N); }
  double dv(double r) const;
  /// V(η, μ) = R1^{N-2} v(R1).
  double V() const { return psi.back(); }
  /// v'(R1).
  double Xi() const;
  /// Samples (r, v, v') on a log grid from R1 to r_max.
  RadialSolution to_radial(const ProblemSpec& spec, double r_max, int per_decade = 40) const;
  std::vector<std::pair<double, double>> samples() const;

 private:
  double interp(const std::vector<double>& f, double xx) const;
};

/// v ← η r^{2-N} - μF - J[v] on [R1, ∞). R1 <= 0 selects R1 automatically.
FarFieldSolution fast_decay_solve(const ProblemSpec& spec, double eta, double R1,
                                  const FarFieldOptions& opts = {});
FarFieldSolution fast_decay_solve(const FarFieldGrid& grid, double eta,
                                  const FarFieldOptions& opts = {});
/// Same with μ overriding the grid's own; the grid itself does not depend on μ.
FarFieldSolution fast_decay_solve(const FarFieldGrid& grid, double eta, double mu,
                                  const FarFieldOptions& opts);

/// Smallest R1 = R1_initial·2^k with J's Lipschitz constant at v = η r^{2-N} below target.
double select_R1(const ProblemSpec& spec, double eta_max, const FarFieldOptions& opts = {});

struct HomogeneousFarProfile {
  RadialSolution kelvin;  // ṽ(r'), r' = 1/r
  double r_tilde = 0;     // first zero of ṽ
  double r_bar = 0;       // 1/r_tilde
  int N = 0;
  double v(double r) const;   // v̄(r, 1)
  double dv(double r) const;  // v̄'(r, 1)
};

HomogeneousFarProfile homogeneous_far_profile(int N, double p, double beta, double k_inf,
                                              double eta = 1.0, const SolverOptions& opts = {});
double kelvin_exponent(int N, double p, double beta);

enum class EtaStatus { Fast, SlowDecayDetected, Undetermined };

struct EtaEstimate {
  EtaStatus status = EtaStatus::Undetermined;
  double eta_direct = 0, eta_formula = 0;
  double eta = 0;
  bool monotone = true;  // r^{N-2}u increasing along samples
  std::string reason;
};

EtaEstimate eta_limit(const RadialSolution& sol, double r_ref = 10.0);

struct EtaWindow {
  double lo, hi;
};

class MatchingFunctions {
 public:
  MatchingFunctions(const ProblemSpec& spec, double R1, std::optional<EtaWindow> window = {},
                    const FarFieldOptions& opts = {});

  double R1() const { return grid_->R1(); }
  double mu() const { return mu_; }
  /// Shares the quadrature grid with a different μ.
  MatchingFunctions at_mu(double mu, std::optional<EtaWindow> window = {}) const;
  const std::optional<EtaWindow>& window() const { return window_; }
  FarFieldSolution profile(double eta) const;
  double V(double eta) const { return profile(eta).V(); }

  struct Match {
    double eta, Xi, V;
    int evaluations;
  };
  /// Solves V(η) = ξ, starting from the bracket guess [lo, hi] when given.
  Match solve(double xi, std::optional<std::pair<double, double>> bracket = {}) const;

 private:
  std::shared_ptr<FarFieldGrid> grid_;
  std::optional<EtaWindow> window_;
  FarFieldOptions opts_;
  double mu_ = 0;
};

struct MatchResult {
  double eta, Xi;
};

MatchResult matching_Xi(const ProblemSpec& spec, double R1, double xi,
                        std::optional<EtaWindow> window = {}, const FarFieldOptions& opts = {});

struct Mismatch {
  double mu, R1;
  double u_R1, du_R1, xi;
  double eta, Xi, H;
};

Mismatch mismatch_H(const ProblemSpec& spec, double mu, double R1,
                    std::optional<EtaWindow> window = {}, const SingularOptions& sopts = {},
                    const FarFieldOptions& fopts = {});
Mismatch mismatch_H(const MatchingFunctions& match, const RadialSolution& u_star, double mu);

struct EnergyReport {
  std::vector<double> t, w, dw, E, dE_measured, dE_dissipation, drift_K, drift_f;
  double max_identity_error = 0;  // max |E' - (-ã w'^2 + D_K + D_f)|
  double max_homogeneous_gap = 0; // max |E' + ã w'^2|
  double scale = 0;               // max |E'| over the samples
  bool nonincreasing = true;
};

/// Far-field energy along w̃(t) = e^{θ̃t}u(e^t) started from sol at t0, sampled every dt.
EnergyReport slow_decay_energy(const RadialSolution& sol, double t0, double t1, double dt = 1e-3);

}  // namespace radsing
