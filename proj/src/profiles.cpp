#include "radsing/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "radsing/errors.hpp"
#include "radsing/numerics/quadrature.hpp"

namespace radsing {

namespace {

void require_positive_radius(double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
}

double pchip_end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (s * d0 <= 0) return 0;
  if (d0 * d1 <= 0 && std::abs(s) > 3 * std::abs(d0)) return 3 * d0;
  return s;
}

// (1 + (r/b)^4)^{-1} and its complement, evaluated without overflow.
std::pair<double, double> switch_pair(double r, double b) {
  const double x = r / b;
  if (x < 1.0) {
    const double x4 = x * x * x * x;
    return {1.0 / (1.0 + x4), x4 / (1.0 + x4)};
  }
  const double y = b / r;
  const double y4 = y * y * y * y;
  return {y4 / (1.0 + y4), 1.0 / (1.0 + y4)};
}

}  // namespace

LogLogTable::LogLogTable(std::vector<double> r, std::vector<double> v) {
  if (r.size() != v.size()) throw TableError("table columns differ in length");
  if (r.size() < 2) throw TableError("table needs at least two rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0)) throw TableError("table radius must be positive");
    if (!(v[i] > 0)) throw TableError("tabulated values must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw TableError("table radii must be strictly increasing");
  }
  const std::size_t n = r.size();
  x_.resize(n);
  y_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_[i] = std::log(r[i]);
    y_[i] = std::log(v[i]);
  }
  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = del[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0) continue;
    const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
    d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
  }
  d_[0] = pchip_end_slope(h[0], h[1], del[0], del[1]);
  d_[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double LogLogTable::r_first() const { return std::exp(x_.front()); }
double LogLogTable::r_last() const { return std::exp(x_.back()); }
double LogLogTable::v_first() const { return std::exp(y_.front()); }
double LogLogTable::v_last() const { return std::exp(y_.back()); }
double LogLogTable::slope_first() const { return (y_[1] - y_[0]) / (x_[1] - x_[0]); }
double LogLogTable::slope_last() const {
  const std::size_t n = x_.size();
  return (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
}

double LogLogTable::operator()(double r) const {
  const double x = std::log(r);
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : std::size_t(it - x_.begin()) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return std::exp(h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1]);
}

CsvTable read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path + "'");
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r >> v)) {
      if (t.r.empty() && lineno == 1) continue;  // header
      throw TableError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    if (!t.r.empty() && !(r > t.r.back()))
      throw TableError(path + ":" + std::to_string(lineno) + ": r must be strictly increasing");
    t.r.push_back(r);
    t.v.push_back(v);
  }
  if (t.r.size() < 2) throw TableError(path + ": need at least two rows");
  return t;
}

CoefficientProfile CoefficientProfile::pure_power(double alpha, double k0) {
  if (!(alpha > -2)) throw DomainError("alpha must exceed -2");
  if (!(k0 > 0)) throw DomainError("k0 must be positive");
  CoefficientProfile K;
  K.kind = CoefficientKind::PurePower;
  K.alpha = K.beta = alpha;
  K.k0 = K.k_inf = k0;
  return K;
}

CoefficientProfile CoefficientProfile::blended_power(double alpha, double k0, double beta,
                                                     double k_inf, double blend_radius) {
  if (!(alpha > -2) || !(beta > -2)) throw DomainError("alpha and beta must exceed -2");
  if (!(k0 > 0) || !(k_inf > 0)) throw DomainError("k0 and k_inf must be positive");
  if (!(blend_radius > 0)) throw DomainError("blend radius must be positive");
  CoefficientProfile K;
  K.kind = CoefficientKind::BlendedPower;
  K.alpha = alpha;
  K.k0 = k0;
  K.beta = beta;
  K.k_inf = k_inf;
  K.blend_radius = blend_radius;
  return K;
}

CoefficientProfile CoefficientProfile::tabulated(std::vector<double> r, std::vector<double> v,
                                                 std::optional<double> alpha,
                                                 std::optional<double> beta) {
  CoefficientProfile K;
  K.kind = CoefficientKind::Tabulated;
  K.table = LogLogTable(std::move(r), std::move(v));
  K.alpha = alpha.value_or(K.table.slope_first());
  K.beta = beta.value_or(K.table.slope_last());
  if (!(K.alpha > -2) || !(K.beta > -2)) throw DomainError("table end exponents must exceed -2");
  K.k0 = K.table.v_first() * std::pow(K.table.r_first(), -K.alpha);
  K.k_inf = K.table.v_last() * std::pow(K.table.r_last(), -K.beta);
  return K;
}

double CoefficientProfile::scaled(double r, double e) const {
  require_positive_radius(r);
  switch (kind) {
    case CoefficientKind::PurePower:
      return e == alpha ? k0 : k0 * std::pow(r, alpha - e);
    case CoefficientKind::BlendedPower: {
      const auto [lo, hi] = switch_pair(r, blend_radius);
      const double a = lo == 0 ? 0 : k0 * lo * std::pow(r, alpha - e);
      const double b = hi == 0 ? 0 : k_inf * hi * std::pow(r, beta - e);
      return a + b;
    }
    case CoefficientKind::Tabulated:
      if (r < table.r_first()) return k0 * std::pow(r, alpha - e);
      if (r > table.r_last()) return k_inf * std::pow(r, beta - e);
      return table(r) * std::pow(r, -e);
  }
  return 0;
}

double CoefficientProfile::eval(double r) const { return scaled(r, 0.0); }

double CoefficientProfile::scale() const {
  switch (kind) {
    case CoefficientKind::PurePower:
      return 1.0;
    case CoefficientKind::BlendedPower:
      return blend_radius;
    case CoefficientKind::Tabulated:
      return std::sqrt(table.r_first() * table.r_last());
  }
  return 1.0;
}

ForcingProfile ForcingProfile::zero() { return ForcingProfile{}; }

ForcingProfile ForcingProfile::power_decay_bump(double nu, double q, double amplitude) {
  if (!(nu > -2)) throw DomainError("nu must exceed -2");
  if (!(amplitude >= 0)) throw DomainError("amplitude must be nonnegative");
  ForcingProfile f;
  f.kind = ForcingKind::PowerDecayBump;
  f.nu = nu;
  f.q = q;
  f.amplitude = amplitude;
  return f;
}

ForcingProfile ForcingProfile::compact_bump(double r1, double r2, double amplitude) {
  if (!(r1 > 0) || !(r2 > r1)) throw DomainError("compact bump needs 0 < r1 < r2");
  if (!(amplitude >= 0)) throw DomainError("amplitude must be nonnegative");
  ForcingProfile f;
  f.kind = ForcingKind::CompactBump;
  f.nu = 0;
  f.q = std::numeric_limits<double>::infinity();
  f.amplitude = amplitude;
  f.r1 = r1;
  f.r2 = r2;
  return f;
}

ForcingProfile ForcingProfile::tabulated(std::vector<double> r, std::vector<double> v,
                                         std::optional<double> nu, std::optional<double> q) {
  ForcingProfile f;
  f.kind = ForcingKind::Tabulated;
  f.table = LogLogTable(std::move(r), std::move(v));
  f.nu = nu.value_or(f.table.slope_first());
  f.q = q.value_or(-f.table.slope_last());
  f.amplitude = 1.0;
  if (!(f.nu > -2)) throw DomainError("forcing exponent at 0 must exceed -2");
  return f;
}

double ForcingProfile::eval(double r) const {
  require_positive_radius(r);
  switch (kind) {
    case ForcingKind::Zero:
      return 0.0;
    case ForcingKind::PowerDecayBump:
      return amplitude * std::pow(r, nu) * std::pow(1.0 + r * r, -0.5 * (q + nu));
    case ForcingKind::CompactBump: {
      if (r <= r1 || r >= r2) return 0.0;
      const double s = (2 * r - r1 - r2) / (r2 - r1);
      return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    case ForcingKind::Tabulated:
      if (r < table.r_first()) return table.v_first() * std::pow(r / table.r_first(), nu);
      if (r > table.r_last()) return table.v_last() * std::pow(r / table.r_last(), -q);
      return table(r);
  }
  return 0.0;
}

double ForcingProfile::f0() const {
  switch (kind) {
    case ForcingKind::PowerDecayBump:
      return amplitude;
    case ForcingKind::Tabulated:
      return table.v_first() * std::pow(table.r_first(), -nu);
    default:
      return 0.0;
  }
}

ProblemSpec ProblemSpec::with_mu(double m) const {
  ProblemSpec s = *this;
  s.mu = m;
  return s;
}

ProblemSpec make_problem(int N, double p, CoefficientProfile K, ForcingProfile f, double mu) {
  ProblemSpec s;
  s.N = N;
  s.p = p;
  s.table = build_exponent_table(N, p, K.alpha, K.beta, K.k0, K.k_inf);
  s.regime = validate_regime(s.table);
  s.K = std::move(K);
  s.f = std::move(f);
  s.mu = mu;
  return s;
}

double eval_K(const CoefficientProfile& K, double r) { return K.eval(r); }
double eval_f(const ForcingProfile& f, double r) { return f.eval(r); }

EmdenFowlerCoeffs emden_fowler_coeffs(const ProblemSpec& spec, double t) {
  const double r = std::exp(t);
  const double L = spec.K.scaled(r, spec.K.alpha);
  const double g = spec.f.is_zero() ? 0.0 : std::exp((2 + spec.table.theta) * t) * spec.f.eval(r);
  return {L, g};
}

EmdenFowlerCoeffs far_emden_fowler_coeffs(const ProblemSpec& spec, double t) {
  const double r = std::exp(t);
  const double L = spec.K.scaled(r, spec.K.beta);
  const double g =
      spec.f.is_zero() ? 0.0 : std::exp((2 + spec.table.theta_tilde) * t) * spec.f.eval(r);
  return {L, g};
}

AsymptoticsReport verify_asymptotics(const ProblemSpec& spec) {
  AsymptoticsReport rep;
  const double scale = spec.K.scale();
  auto log_slope = [](auto&& fn, double r) {
    const double h = 1e-3;
    return (std::log(fn(r * std::exp(h))) - std::log(fn(r * std::exp(-h)))) / (2 * h);
  };
  auto K = [&](double r) { return spec.K.eval(r); };
  const double r_small = 1e-6 * scale, r_large = 1e6 * scale;
  rep.alpha_measured = log_slope(K, r_small);
  rep.k0_measured = K(r_small) * std::pow(r_small, -rep.alpha_measured);
  rep.beta_measured = log_slope(K, r_large);
  rep.k_inf_measured = K(r_large) * std::pow(r_large, -rep.beta_measured);

  auto check = [&](bool ok, const std::string& what) {
    if (!ok) rep.violations.push_back(what);
  };
  check(std::abs(K(r_small) * std::pow(r_small, -spec.K.alpha) / spec.K.k0 - 1) < 1e-3,
        "K(r) r^-alpha does not approach k0 near 0");
  check(std::abs(K(r_large) * std::pow(r_large, -spec.K.beta) / spec.K.k_inf - 1) < 1e-3,
        "K(r) r^-beta does not approach k_inf at infinity");
  check(spec.K.alpha > -2, "alpha must exceed -2");
  check(spec.K.beta > -2, "beta must exceed -2");

  if (spec.f.is_zero()) return rep;

  const double fs = spec.f.kind == ForcingKind::CompactBump ? spec.f.r1 : 1.0;
  auto f = [&](double r) { return spec.f.eval(r); };
  const double f_small = f(1e-6 * fs), f_large = f(1e6 * std::max(fs, spec.f.r2));
  if (f_small > 0) rep.nu_measured = log_slope(f, 1e-6 * fs);
  if (f_large > 0) rep.q_measured = -log_slope(f, 1e6 * std::max(fs, spec.f.r2));
  check(spec.f.nu > -2, "nu must exceed -2");
  check(spec.f.q > spec.N, "decay exponent q must exceed N");
  if (rep.q_measured)
    check(*rep.q_measured > spec.N - 1e-6, "measured decay exponent does not exceed N");
  if (rep.nu_measured) check(*rep.nu_measured > -2, "measured growth exponent at 0 is <= -2");

  const int N = spec.N;
  auto near = [&](double tol) {
    return numerics::integrate_adaptive<double>([&](double r) { return r > 0 ? r * f(r) : 0.0; },
                                                0.0, 1.0, 0.0, tol)
        .value;
  };
  auto far = [&](double tol) {
    return numerics::integrate_to_infinity<double>(
               [&](double r) { return std::pow(r, N - 1) * f(r); }, 1.0, 0.0, tol)
        .value;
  };
  rep.integral_near = near(1e-9);
  rep.integral_far = far(1e-9);
  rep.integral_near_refinement = std::abs(near(5e-10) / rep.integral_near - 1);
  rep.integral_far_refinement =
      rep.integral_far == 0 ? 0 : std::abs(far(5e-10) / rep.integral_far - 1);
  check(std::isfinite(rep.integral_near) && rep.integral_near_refinement < 1e-6,
        "integral of r f over (0,1) is not stable");
  check(std::isfinite(rep.integral_far) && rep.integral_far_refinement < 1e-6,
        "integral of r^{N-1} f over (1,inf) is not stable");
  return rep;
}

}  // namespace radsing
