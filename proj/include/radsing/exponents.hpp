#pragma once

#include <optional>
#include <string>

namespace radsing {

/// A real number or +infinity, kept distinct from any finite sentinel.
class Extended {
 public:
  static Extended infinity() { return Extended{}; }
  static Extended finite(double v) { return Extended{v}; }

  bool is_infinite() const { return !value_.has_value(); }
  double value() const;  // throws DomainError when infinite
  bool less_than(double x) const { return !is_infinite() && *value_ < x; }
  bool greater_than(double x) const { return is_infinite() || *value_ > x; }
  std::string to_string() const;

 private:
  Extended() = default;
  explicit Extended(double v) : value_(v) {}
  std::optional<double> value_;
};

struct ExponentTable {
  int N = 0;
  double p = 0;
  double alpha = 0, beta = 0, k0 = 1, k_inf = 1;

  double p_S_alpha = 0;
  Extended p_JL_alpha = Extended::infinity();
  double p_S_beta = 0;

  double theta = 0, a = 0, c = 0, A = 0, gamma = 0;
  double theta_tilde = 0, a_tilde = 0, c_tilde = 0, A_tilde = 0, gamma_tilde = 0;

  double A_pow() const;        // A^{p-1}
  double A_tilde_pow() const;  // Ã^{p-1}
};

struct RegimeReport {
  bool supercritical_at_0 = false;
  bool supercritical_at_inf = false;
  bool below_JL = false;
  bool slow_decays_slower_than_fast = false;
};

double sobolev_exponent(int N, double alpha);
Extended joseph_lundgren_exponent(int N, double alpha);
ExponentTable build_exponent_table(int N, double p, double alpha, double beta, double k0,
                                   double k_inf);
RegimeReport validate_regime(const ExponentTable& table);

}  // namespace radsing
