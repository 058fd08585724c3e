#include <cmath>

#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/shooting.hpp"

using namespace radsing;

namespace {

ProblemSpec homogeneous(int N, double p, double alpha = 0) {
  return make_problem(N, p, CoefficientProfile::pure_power(alpha, 1), ForcingProfile::zero(), 0);
}

ProblemSpec forced(double mu) {
  return make_problem(13, 2, CoefficientProfile::pure_power(0, 1), ForcingProfile::power_decay_bump(0, 14, 1), mu);
}

}  // namespace

TEST_SUITE("shooting") {
  TEST_CASE("Lane-Emden closed form, N=3, p=5") {
    const RadialSolution u = regular_solve(homogeneous(3, 5), 1.0, 100);
    CHECK(u.termination == Termination::ReachedRmax);
    double worst = 0;
    for (double r = 1e-2; r <= 100; r *= 1.3) {
      const double exact = 1 / std::sqrt(1 + r * r / 3);
      worst = std::max(worst, std::abs(u.u(r) / exact - 1));
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("long double reference values, N=13, p=2, zeta=1") {
    const RadialSolution u = regular_solve(homogeneous(13, 2), 1.0, 20);
    const double r[] = {0.5, 1, 2, 5, 10, 16};
    const double ref[] = {0.990464128736919631, 0.962782009540252261, 0.864398419391458135,
                          0.485692331738037499, 0.172584487847945995, 0.0702518657237604155};
    for (int i = 0; i < 6; ++i) CHECK(u.u(r[i]) == doctest::Approx(ref[i]).epsilon(1e-9));
  }

  TEST_CASE("scaling law of the homogeneous problem") {
    const auto spec = homogeneous(13, 2);
    const RadialSolution one = regular_solve(spec, 1.0, 1e4);
    for (double zeta : {3.0, 250.0, 1e4}) {
      const RadialSolution u = regular_solve(spec, zeta, 100);
      for (double r : {0.01, 0.3, 7.0, 90.0}) {
        const double s = std::pow(zeta, 0.5) * r;
        CHECK(u.u(r) == doctest::Approx(zeta * one.u(s)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("slow tail r^theta u -> gamma") {
    const RadialSolution u = regular_solve(homogeneous(13, 2), 1.0, 1e4);
    CHECK(1e8 * u.u(1e4) / 18 == doctest::Approx(1).epsilon(1e-2));
  }

  TEST_CASE("samples are strictly increasing in r") {
    const RadialSolution u = regular_solve(homogeneous(13, 2), 1.0, 1e3);
    for (std::size_t i = 1; i < u.samples.size(); ++i) REQUIRE(u.samples[i].r > u.samples[i - 1].r);
    CHECK(u.r_max() == doctest::Approx(1e3));
  }

  TEST_CASE("interpolant reproduces samples") {
    const RadialSolution u = regular_solve(homogeneous(13, 2), 5.0, 50);
    for (std::size_t i = 0; i < u.samples.size(); i += 7) {
      CHECK(u.u(u.samples[i].r) == doctest::Approx(u.samples[i].u).epsilon(1e-14));
      CHECK(u.du(u.samples[i].r) == doctest::Approx(u.samples[i].du).epsilon(1e-12));
    }
  }

  TEST_CASE("large forcing makes the solution vanish") {
    const auto spec = forced(3e4);
    const RadialSolution u = regular_solve(spec, 1.0, 100);
    CHECK(u.termination == Termination::HitZero);
    REQUIRE(u.r0);
    CHECK(std::abs(u.samples.back().u) < 1e-10);
    const FirstZero z = first_zero(spec, 1.0, 100);
    REQUIRE(z.found);
    CHECK(z.r0 == doctest::Approx(*u.r0).epsilon(1e-10));
    CHECK(radial_second_derivative(spec, *u.r0, 0.0, u.samples.back().du) < 0);
  }

  TEST_CASE("continuing past the zero keeps the first zero") {
    SolverOptions o;
    o.stop_at_zero = false;
    const RadialSolution u = regular_solve(forced(3e4), 1.0, 100, o);
    REQUIRE(u.r0);
    CHECK(u.r_max() == doctest::Approx(100));
  }

  TEST_CASE("positive solutions have no zero") {
    CHECK_FALSE(first_zero(homogeneous(13, 2), 1.0, 1e3).found);
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(regular_solve(homogeneous(13, 2), -1.0, 10), DomainError);
    CHECK_THROWS_AS(regular_solve(homogeneous(13, 2), 1.0, -10), DomainError);
  }

  TEST_CASE("Emden-Fowler deviation decays at the linearized rate") {
    const auto spec = homogeneous(13, 2);
    const auto tr = integrate_deviation(spec, 1e-3, 0, 0, 8);
    REQUIRE(tr.status == numerics::OdeStatus::Completed);
    double peak_early = 0, peak_late = 0;
    for (const auto& s : tr.samples) {
      if (s.t > 1 && s.t < 3) peak_early = std::max(peak_early, std::abs(s.z));
      if (s.t > 6 && s.t < 8) peak_late = std::max(peak_late, std::abs(s.z));
    }
    CHECK(std::log(peak_early / peak_late) / 5 == doctest::Approx(3.5).epsilon(0.05));
  }
}
