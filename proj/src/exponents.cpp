#include "radsing/exponents.hpp"

#include <cmath>
#include <cstdio>

#include "radsing/errors.hpp"

namespace radsing {

namespace {

void check_dimension(int N, double alpha) {
  if (N < 3) throw DomainError("N must be at least 3, got " + std::to_string(N));
  if (!(alpha > -2.0)) throw DomainError("weight exponent must exceed -2");
}

}  // namespace

double Extended::value() const {
  if (!value_) throw DomainError("value is infinite");
  return *value_;
}

std::string Extended::to_string() const {
  if (!value_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *value_);
  return buf;
}

double ExponentTable::A_pow() const { return theta * c; }
double ExponentTable::A_tilde_pow() const { return theta_tilde * c_tilde; }

double sobolev_exponent(int N, double alpha) {
  check_dimension(N, alpha);
  return (N + 2.0 + 2.0 * alpha) / (N - 2.0);
}

Extended joseph_lundgren_exponent(int N, double alpha) {
  check_dimension(N, alpha);
  if (N <= 10.0 + 4.0 * alpha) return Extended::infinity();
  const double root = std::sqrt((2.0 + alpha) * (2.0 * N - 2.0 + alpha));
  return Extended::finite(1.0 + 2.0 * (2.0 + alpha) / (N - 4.0 - alpha - root));
}

ExponentTable build_exponent_table(int N, double p, double alpha, double beta, double k0,
                                   double k_inf) {
  check_dimension(N, alpha);
  check_dimension(N, beta);
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(k0 > 0.0) || !(k_inf > 0.0)) throw DomainError("k0 and k_inf must be positive");

  ExponentTable t;
  t.N = N;
  t.p = p;
  t.alpha = alpha;
  t.beta = beta;
  t.k0 = k0;
  t.k_inf = k_inf;
  t.p_S_alpha = sobolev_exponent(N, alpha);
  t.p_JL_alpha = joseph_lundgren_exponent(N, alpha);
  t.p_S_beta = sobolev_exponent(N, beta);

  const double q = 1.0 / (p - 1.0);
  t.theta = (2.0 + alpha) * q;
  t.a = N - 2.0 - 2.0 * t.theta;
  t.c = N - 2.0 - t.theta;
  t.theta_tilde = (2.0 + beta) * q;
  t.a_tilde = N - 2.0 - 2.0 * t.theta_tilde;
  t.c_tilde = N - 2.0 - t.theta_tilde;

  // A and Ã are only defined when θc > 0 (p > p_S); leave NaN otherwise.
  const double Ap = t.theta * t.c;
  const double Atp = t.theta_tilde * t.c_tilde;
  t.A = Ap > 0 ? std::pow(Ap, q) : std::nan("");
  t.gamma = Ap > 0 ? std::pow(k0, -q) * t.A : std::nan("");
  t.A_tilde = Atp > 0 ? std::pow(Atp, q) : std::nan("");
  t.gamma_tilde = Atp > 0 ? std::pow(k_inf, -q) * t.A_tilde : std::nan("");
  return t;
}

RegimeReport validate_regime(const ExponentTable& t) {
  RegimeReport r;
  r.supercritical_at_0 = t.p > t.p_S_alpha;
  r.supercritical_at_inf = t.p > t.p_S_beta;
  r.below_JL = t.p_JL_alpha.greater_than(t.p);
  r.slow_decays_slower_than_fast = t.theta_tilde < t.N - 2.0;
  return r;
}

}  // namespace radsing
