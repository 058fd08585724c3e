#include <cmath>

#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/singular.hpp"

using namespace radsing;

namespace {

ProblemSpec homogeneous(int N, double p, double alpha = 0) {
  return make_problem(N, p, CoefficientProfile::pure_power(alpha, 1), ForcingProfile::zero(), 0);
}

ProblemSpec forced(double mu) {
  return make_problem(13, 2, CoefficientProfile::pure_power(0, 1), ForcingProfile::power_decay_bump(0, 14, 1), mu);
}

double max_rel_to_power(const RadialSolution& s, double gamma, double theta, double lo, double hi) {
  double worst = 0;
  for (double r = lo; r <= hi; r *= 1.1) worst = std::max(worst, std::abs(s.u(r) * std::pow(r, theta) / gamma - 1));
  return worst;
}

}  // namespace

TEST_SUITE("singular") {
  TEST_CASE("characteristic roots, N=13, p=2") {
    const auto [l1, l2] = characteristic_roots(homogeneous(13, 2).table);
    CHECK(l1.real() == doctest::Approx(-3.5));
    CHECK(std::abs(l1.imag()) == doctest::Approx(std::sqrt(18 - 12.25)));
    CHECK(l2.real() == doctest::Approx(-3.5));
  }

  TEST_CASE("homogeneous singular solution is the explicit power law") {
    for (double alpha : {0.0, 1.0}) {
      const auto spec = homogeneous(13, 2, alpha);
      const SingularSolution s = singular_extend(spec, 1e3);
      CHECK(s.positive);
      CHECK(max_rel_to_power(s.solution, spec.table.gamma, spec.table.theta, 1e-3, 1e3) < 1e-8);
    }
  }

  TEST_CASE("forced singular solution: Richardson check and near-origin limit") {
    const auto spec = forced(1);
    const SingularSolution s = singular_extend(spec, 1e3);
    CHECK(s.positive);
    CHECK(s.richardson_delta < 1e-8);
    const auto& first = s.solution.samples.front();
    CHECK(std::pow(first.r, 2) * first.u / 18 == doctest::Approx(1).epsilon(1e-4));
  }

  TEST_CASE("large forcing makes the singular solution vanish") {
    const SingularSolution s = singular_extend(forced(3e4), 1e3);
    CHECK_FALSE(s.positive);
    CHECK(s.r_fail > 0);
    CHECK(s.r_fail < 1e3);
  }

  TEST_CASE("subcritical exponent is rejected") {
    CHECK_THROWS_AS(singular_extend(homogeneous(13, 1.2), 10), RegimeError);
  }

  TEST_CASE("Picard oracle agrees with forward integration") {
    for (double mu : {0.0, 50.0}) {
      const auto spec = forced(mu);
      const SingularSolution fwd = singular_extend(spec, 10);
      const PicardResult pic = picard_singular_oracle(spec, 0.0, 200);
      REQUIRE(pic.converged);
      double worst = 0;
      for (std::size_t i = 0; i < pic.t.size(); ++i) {
        if (pic.t[i] < -25) continue;
        const double r = std::exp(pic.t[i]);
        const double u = (18 + pic.z[i]) * std::exp(-2 * pic.t[i]);
        worst = std::max(worst, std::abs(fwd.solution.u(r) / u - 1));
      }
      CHECK(worst < 1e-6);
    }
  }

  TEST_CASE("regular solutions approach the singular one") {
    const auto spec = homogeneous(13, 2);
    const auto tab = convergence_to_singular(spec, {1e2, 1e4, 1e6}, {0.5, 1.0, 2.0});
    CHECK(tab.decreasing);
    CHECK(tab.rows.back().sup_du < tab.rows.front().sup_du);
  }
}
