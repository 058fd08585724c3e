#include "doctest.h"
#include "oracle.hpp"
#include "radsing/errors.hpp"
#include "radsing/exponents.hpp"

using namespace radsing;

TEST_SUITE("exponents") {
  TEST_CASE("Sobolev exponent") {
    CHECK(sobolev_exponent(13, 0) == doctest::Approx(15.0 / 11.0).epsilon(1e-15));
    CHECK(sobolev_exponent(3, 1) == doctest::Approx(7.0).epsilon(1e-15));
  }

  TEST_CASE("Joseph-Lundgren exponent against long double evaluation") {
    for (int N : {11, 13, 20}) {
      const double ref = double(oracle::p_JL(N, 0));
      CHECK(joseph_lundgren_exponent(N, 0).value() == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(joseph_lundgren_exponent(13, 0).value() == doctest::Approx(2.9306913006394556577).epsilon(1e-13));
    CHECK(joseph_lundgren_exponent(10, 0).is_infinite());
    CHECK(joseph_lundgren_exponent(14, 1).is_infinite());
    CHECK(joseph_lundgren_exponent(10, 0).to_string() == "inf");
    CHECK_THROWS_AS(joseph_lundgren_exponent(10, 0).value(), DomainError);
  }

  TEST_CASE("derived constants for N=13, p=2") {
    const ExponentTable t = build_exponent_table(13, 2, 0, 0, 1, 1);
    CHECK(t.theta == doctest::Approx(2));
    CHECK(t.a == doctest::Approx(7));
    CHECK(t.gamma == doctest::Approx(18));
    CHECK(t.A_pow() == doctest::Approx(18));
    CHECK(t.gamma_tilde == doctest::Approx(18));
    const RegimeReport r = validate_regime(t);
    CHECK(r.below_JL);
    CHECK(r.supercritical_at_0);
  }

  TEST_CASE("weighted constants") {
    const ExponentTable t = build_exponent_table(13, 2, 1, 0, 1, 1);
    CHECK(t.theta == doctest::Approx(3));
    CHECK(t.gamma == doctest::Approx(24));  // θ(N-2-θ)
    const ExponentTable k = build_exponent_table(13, 2, 0, 0, 2, 1);
    CHECK(k.gamma == doctest::Approx(9));  // γ scales as k0^{-1/(p-1)}
  }

  TEST_CASE("above the Joseph-Lundgren exponent") {
    CHECK_FALSE(validate_regime(build_exponent_table(13, 4, 0, 0, 1, 1)).below_JL);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(build_exponent_table(2, 2, 0, 0, 1, 1), DomainError);
    CHECK_THROWS_AS(build_exponent_table(13, 1, 0, 0, 1, 1), DomainError);
    CHECK_THROWS_AS(build_exponent_table(13, 2, -3, 0, 1, 1), DomainError);
    CHECK_THROWS_AS(build_exponent_table(13, 2, 0, 0, 0, 1), DomainError);
  }
}
