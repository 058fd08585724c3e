#include <cmath>

#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/muscan.hpp"

using namespace radsing;

namespace {

ProblemSpec corollary(double amplitude = 1) {
  return make_problem(13, 2, CoefficientProfile::pure_power(0, 1),
                      ForcingProfile::power_decay_bump(0, 14, amplitude), 0);
}

// Regression value from a machine-precision bisection of the fast root.
constexpr double kMu1 = 12823.121082974708;

}  // namespace

TEST_SUITE("muscan") {
  TEST_CASE("classification at the ends of the range") {
    const auto spec = corollary();
    CHECK(classify_mu(spec, 0).cls == MuClass::SlowDecay);
    const double probe = positivity_probe(spec);
    CHECK(probe == 16384);
    const auto c = classify_mu(spec, 2 * probe);
    CHECK(c.cls == MuClass::PositivityFailure);
    CHECK(c.r0 > 0);
  }

  TEST_CASE("slow decay has a positive mismatch, failure beyond the root") {
    const auto spec = corollary();
    const MuClassifier C(spec);
    CHECK(C.signed_mismatch(0) > 0);
    CHECK(C.signed_mismatch(0.9 * kMu1) > 0);
    CHECK(C.signed_mismatch(1.1 * kMu1) < 0);
  }

  TEST_CASE("mu1 bracket") {
    const auto spec = corollary();
    const MuInterval m = find_mu1(spec, 1e-3);
    CHECK(m.width() <= 1e-3);
    CHECK(m.lo <= kMu1);
    CHECK(m.hi >= kMu1);
    CHECK(classify_mu(spec, m.lo).cls == MuClass::SlowDecay);
    CHECK(classify_mu(spec, m.hi).cls != MuClass::SlowDecay);
  }

  TEST_CASE("doubling the forcing halves mu1") {
    const MuInterval a = find_mu1(corollary(1), 1e-3);
    const MuInterval b = find_mu1(corollary(2), 1e-3);
    CHECK(2 * b.mid() == doctest::Approx(a.mid()).epsilon(1e-6));
  }

  TEST_CASE("fast root located to machine width") {
    const FastRootScan s = find_fast_roots(corollary(), 0, 32768, 16);
    REQUIRE(s.roots.size() == 1);
    const auto& r = s.roots[0];
    CHECK(r.interval.width() <= 4e-12);
    CHECK(r.interval.mid() == doctest::Approx(kMu1).epsilon(1e-12));
    const auto c = classify_mu(corollary(), r.interval.mid());
    CHECK(c.cls == MuClass::FastDecay);
    CHECK(c.eta > 0);
  }

  TEST_CASE("homogeneous problem has no mu1") {
    const auto spec = make_problem(13, 2, CoefficientProfile::pure_power(0, 1), ForcingProfile::zero(), 0);
    CHECK(classify_mu(spec, 0).cls == MuClass::SlowDecay);
  }

  TEST_CASE("scan reproduces the dichotomy") {
    const MuScanReport r = scan_mu(corollary(), 32);
    REQUIRE(r.mu1_estimate);
    CHECK(r.mu1_estimate->lo <= kMu1);
    CHECK(r.mu1_estimate->hi >= kMu1);
    CHECK(r.consistent);
    REQUIRE(r.mu_star_bracket);
    CHECK(r.mu_star_bracket->lo <= kMu1);
    CHECK(r.mu_star_bracket->hi >= kMu1);
    CHECK(r.H.size() == r.grid.size());
  }

  TEST_CASE("census on a coarse grid") {
    std::vector<double> z;
    for (int i = 0; i < 40; ++i) z.push_back(10 * std::pow(1e5, i / 39.0));
    const CensusReport c = bounded_solution_census(corollary().with_mu(kMu1 / 2), z, 1e3);
    CHECK(c.rows.size() == 40);
    CHECK(c.increments.size() >= 3);
    CHECK(c.candidates > 0);
  }

  TEST_CASE("census requires a positive singular solution") {
    CHECK_THROWS_AS(bounded_solution_census(corollary().with_mu(3e4), {10, 100}, 1e3), PositivityError);
  }
}
