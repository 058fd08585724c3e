#include <cmath>

#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/farfield.hpp"

using namespace radsing;

namespace {

ProblemSpec homogeneous() {
  return make_problem(13, 2, CoefficientProfile::pure_power(0, 1), ForcingProfile::zero(), 0);
}

ProblemSpec forced(double mu) {
  return make_problem(13, 2, CoefficientProfile::pure_power(0, 1), ForcingProfile::power_decay_bump(0, 14, 1), mu);
}

}  // namespace

TEST_SUITE("farfield") {
  TEST_CASE("Kelvin exponent") { CHECK(kelvin_exponent(13, 2, 0) == 7); }

  TEST_CASE("zero of the Kelvin transform against the long double reference") {
    const HomogeneousFarProfile h = homogeneous_far_profile(13, 2, 0, 1);
    CHECK(h.r_bar == doctest::Approx(0.456026272275072764).epsilon(1e-10));
  }

  TEST_CASE("integral equation agrees with the Kelvin profile") {
    const auto spec = homogeneous();
    const HomogeneousFarProfile h = homogeneous_far_profile(13, 2, 0, 1);
    const FarFieldSolution s = fast_decay_solve(spec, 1.0, 0.0);
    REQUIRE(s.converged);
    CHECK(s.lipschitz <= 1.0 / 3.0);
    for (double r : {s.R1, 2 * s.R1, 10 * s.R1, 1e3 * s.R1}) CHECK(s.v(r) == doctest::Approx(h.v(r)).epsilon(1e-8));
  }

  TEST_CASE("contraction ratio and eta recovery") {
    const auto spec = forced(100);
    const FarFieldSolution s = fast_decay_solve(spec, 5.0, 0.0);
    REQUIRE(s.converged);
    for (double q : s.ratios) CHECK(q <= 1.0 / 3.0);
    const RadialSolution rad = s.to_radial(spec, 1e5);
    const EtaEstimate e = eta_limit(rad, s.R1);
    CHECK(e.status == EtaStatus::Fast);
    CHECK(e.eta == doctest::Approx(5.0).epsilon(1e-6));
  }

  TEST_CASE("matching function is invertible with slope at least one half") {
    const auto spec = forced(100);
    const double R1 = select_R1(spec, 50.0);
    const MatchingFunctions m(spec, R1, EtaWindow{1, 60});
    for (double eta : {2.0, 5.0, 10.0, 25.0, 50.0}) {
      const double d = 1e-4 * eta;
      CHECK((m.V(eta + d) - m.V(eta - d)) / (2 * d) >= 0.5);
      const auto match = m.solve(m.V(eta));
      CHECK(match.eta == doctest::Approx(eta).epsilon(1e-6));
    }
  }

  TEST_CASE("scaling of the homogeneous fast profile") {
    const HomogeneousFarProfile one = homogeneous_far_profile(13, 2, 0, 1, 1.0);
    const HomogeneousFarProfile two = homogeneous_far_profile(13, 2, 0, 1, 2.0);
    // λ^θ v(λr) has η scaled by λ^{θ+2-N}, so the zero moves by η^{1/(N-2-θ)}.
    const double k = std::pow(2.0, 1.0 / (11 - 2));
    CHECK(two.r_bar / k == doctest::Approx(one.r_bar).epsilon(1e-8));
  }

  TEST_CASE("energy identity along the homogeneous slow tail") {
    const auto spec = homogeneous();
    const RadialSolution u = regular_solve(spec, 1.0, 1e3);
    const EnergyReport e = slow_decay_energy(u, std::log(10.0), std::log(1e3));
    CHECK(e.max_homogeneous_gap < 1e-8);
    CHECK(e.nonincreasing);
  }

  TEST_CASE("eta_limit flags a slow tail") {
    const RadialSolution u = regular_solve(homogeneous(), 1.0, 1e5);
    CHECK(eta_limit(u).status == EtaStatus::SlowDecayDetected);
  }

  TEST_CASE("nonpositive eta is rejected") { CHECK_THROWS_AS(fast_decay_solve(homogeneous(), 0.0, 10.0), DomainError); }
}
