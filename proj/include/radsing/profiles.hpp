#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radsing/exponents.hpp"

namespace radsing {

/// Monotone piecewise-cubic interpolation in log-log coordinates.
class LogLogTable {
 public:
  LogLogTable() = default;
  LogLogTable(std::vector<double> r, std::vector<double> v);

  bool empty() const { return x_.empty(); }
  double r_first() const;
  double r_last() const;
  double v_first() const;
  double v_last() const;
  // End slopes d log v / d log r estimated from the first/last two samples.
  double slope_first() const;
  double slope_last() const;
  double operator()(double r) const;  // only inside [r_first, r_last]
  const std::vector<double>& log_r() const { return x_; }
  const std::vector<double>& log_v() const { return y_; }

 private:
  std::vector<double> x_, y_, d_;
};

struct CsvTable {
  std::vector<double> r, v;
};

/// Two-column CSV (r,value), optional header line, strictly increasing r.
CsvTable read_two_column_csv(const std::string& path);

enum class CoefficientKind { PurePower, BlendedPower, Tabulated };

struct CoefficientProfile {
  CoefficientKind kind = CoefficientKind::PurePower;
  double alpha = 0, k0 = 1, beta = 0, k_inf = 1, blend_radius = 1;
  LogLogTable table;

  static CoefficientProfile pure_power(double alpha, double k0);
  static CoefficientProfile blended_power(double alpha, double k0, double beta, double k_inf,
                                          double blend_radius);
  // Missing exponents are inferred from the end slopes; k0, k_inf are anchored to the table ends.
  static CoefficientProfile tabulated(std::vector<double> r, std::vector<double> K,
                                      std::optional<double> alpha = std::nullopt,
                                      std::optional<double> beta = std::nullopt);

  double eval(double r) const;
  // K(r)·r^{-e} computed without forming r^e separately where possible.
  double scaled(double r, double e) const;
  // Characteristic radius of the profile (where the asymptotic regimes meet).
  double scale() const;
};

enum class ForcingKind { Zero, PowerDecayBump, CompactBump, Tabulated };

struct ForcingProfile {
  ForcingKind kind = ForcingKind::Zero;
  double nu = 0;
  double q = 0;
  double amplitude = 0;
  double r1 = 0, r2 = 0;  // CompactBump support
  LogLogTable table;

  static ForcingProfile zero();
  static ForcingProfile power_decay_bump(double nu, double q, double amplitude);
  static ForcingProfile compact_bump(double r1, double r2, double amplitude);
  static ForcingProfile tabulated(std::vector<double> r, std::vector<double> f,
                                  std::optional<double> nu = std::nullopt,
                                  std::optional<double> q = std::nullopt);

  double eval(double r) const;
  // Coefficient f0 with f(r) ≈ f0·r^ν as r → 0.
  double f0() const;
  bool is_zero() const { return kind == ForcingKind::Zero || amplitude == 0.0; }
};

struct ProblemSpec {
  int N = 3;
  double p = 2;
  CoefficientProfile K;
  ForcingProfile f;
  double mu = 0;
  ExponentTable table;
  RegimeReport regime;

  double alpha() const { return K.alpha; }
  double beta() const { return K.beta; }
  ProblemSpec with_mu(double m) const;
};

ProblemSpec make_problem(int N, double p, CoefficientProfile K, ForcingProfile f, double mu);

double eval_K(const CoefficientProfile& K, double r);
double eval_f(const ForcingProfile& f, double r);

struct EmdenFowlerCoeffs {
  double L, g;
};

/// L(t) = e^{-αt}K(e^t), g(t) = e^{(2+θ)t} f(e^t).
EmdenFowlerCoeffs emden_fowler_coeffs(const ProblemSpec& spec, double t);
/// Far-field analogue with (β, θ̃).
EmdenFowlerCoeffs far_emden_fowler_coeffs(const ProblemSpec& spec, double t);

struct AsymptoticsReport {
  double alpha_measured = 0, k0_measured = 0;
  double beta_measured = 0, k_inf_measured = 0;
  std::optional<double> nu_measured, q_measured;
  double integral_near = 0;  // ∫_0^1 r f dr
  double integral_far = 0;   // ∫_1^∞ r^{N-1} f dr
  double integral_near_refinement = 0;
  double integral_far_refinement = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

AsymptoticsReport verify_asymptotics(const ProblemSpec& spec);

}  // namespace radsing
