#include <cmath>

#include "doctest.h"
#include "radsing/intersection.hpp"

using namespace radsing;

namespace {

ProblemSpec homogeneous(double p) {
  return make_problem(13, p, CoefficientProfile::pure_power(0, 1), ForcingProfile::zero(), 0);
}

}  // namespace

TEST_SUITE("intersection") {
  TEST_CASE("sigma sequence against the long double reference") {
    const SigmaSequence s = sigma_sequence(13, 2, 0, 1, 4);
    REQUIRE(s.sigma.size() == 4);
    CHECK(s.alternation_ok);
    CHECK(s.sigma[0] == doctest::Approx(16.705870216467483).epsilon(1e-9));
    CHECK(s.sigma[1] == doctest::Approx(61.822505171285836).epsilon(1e-9));
    CHECK(s.sigma[2] == doctest::Approx(229.15963198223437).epsilon(1e-7));
    CHECK(s.sigma[3] == doctest::Approx(849.41967137702594).epsilon(1e-6));
  }

  TEST_CASE("intersection number grows with zeta below the Joseph-Lundgren exponent") {
    const GrowthTable g = intersection_growth(homogeneous(2), {1e2, 1e3, 1e4, 1e5, 1e6}, 1.0);
    REQUIRE(g.rows.size() == 5);
    CHECK(g.nondecreasing);
    const int expected[] = {0, 1, 2, 3, 4};
    for (int i = 0; i < 5; ++i) CHECK(g.rows[i].count == expected[i]);
    CHECK(g.rows[1].first_scaled == doctest::Approx(16.705870216467483).epsilon(1e-6));
  }

  TEST_CASE("no intersections above the Joseph-Lundgren exponent") {
    const GrowthTable g = intersection_growth(homogeneous(4), {1e2, 1e3, 1e4, 1e5, 1e6}, 1.0);
    for (const auto& r : g.rows) CHECK(r.count == 0);
  }

  TEST_CASE("identical trajectories are degenerate") {
    const auto spec = homogeneous(2);
    const RadialSolution u = regular_solve(spec, 1.0, 10);
    const IntersectionReport rep = count_intersections(u, u, 0, 10);
    CHECK(rep.count == 0);
    CHECK(rep.degenerate);
  }

  TEST_CASE("crossing slopes alternate") {
    const auto spec = homogeneous(2);
    const RadialSolution a = regular_solve(spec, 1.0, 1e3);
    const RadialSolution b = singular_extend(spec, 1e3).solution;
    const IntersectionReport rep = count_intersections(a, b, 0, 1e3);
    CHECK(rep.count >= 3);
    CHECK(rep.alternating);
    CHECK(rep.crossings[0].r == doctest::Approx(16.705870216467483).epsilon(1e-8));
  }
}
