#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "radsing/errors.hpp"
#include "radsing/profiles.hpp"

using namespace radsing;

TEST_SUITE("profiles") {
  TEST_CASE("pure and blended powers") {
    const auto K = CoefficientProfile::pure_power(1, 3);
    CHECK(K.eval(2) == doctest::Approx(6));
    const auto B = CoefficientProfile::blended_power(1, 2, -1, 5, 1);
    CHECK(B.eval(1e-6) / (2 * 1e-6) == doctest::Approx(1).epsilon(1e-4));
    CHECK(B.eval(1e6) / (5 * 1e-6) == doctest::Approx(1).epsilon(1e-4));
    CHECK(B.scaled(1e-3, 1) == doctest::Approx(B.eval(1e-3) / 1e-3).epsilon(1e-12));
  }

  TEST_CASE("tabulated power law is reproduced and its exponents inferred") {
    std::vector<double> r, v;
    for (int i = 0; i <= 40; ++i) {
      r.push_back(std::pow(10.0, -2 + 0.1 * i));
      v.push_back(3 * std::pow(r.back(), 1.5));
    }
    const auto K = CoefficientProfile::tabulated(r, v);
    CHECK(K.alpha == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(K.beta == doctest::Approx(1.5).epsilon(1e-12));
    for (double x : {0.0123, 0.5, 7.7, 99.0}) CHECK(K.eval(x) == doctest::Approx(3 * std::pow(x, 1.5)).epsilon(1e-12));
    CHECK(K.eval(1e-5) == doctest::Approx(3 * std::pow(1e-5, 1.5)).epsilon(1e-12));
  }

  TEST_CASE("table validation") {
    CHECK_THROWS_AS(LogLogTable({1, 1}, {1, 2}), TableError);
    CHECK_THROWS_AS(LogLogTable({1, 2}, {1, -2}), TableError);
    CHECK_THROWS_AS(LogLogTable({1}, {1}), TableError);
    CHECK_THROWS_AS(read_two_column_csv("/nonexistent/table.csv"), ConfigError);
    const auto path = (std::filesystem::temp_directory_path() / "radsing_bad_table.csv").string();
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("r,K\n1,2\n0.5,3\n", f);
    std::fclose(f);
    CHECK_THROWS_AS(read_two_column_csv(path), TableError);
  }

  TEST_CASE("power-decay bump") {
    const auto f = ForcingProfile::power_decay_bump(0, 14, 1);
    CHECK(f.f0() == 1);
    CHECK(f.eval(1e-8) == doctest::Approx(1).epsilon(1e-12));
    const double slope = std::log(f.eval(2e4) / f.eval(1e4)) / std::log(2.0);
    CHECK(slope == doctest::Approx(-14).epsilon(1e-6));
    CHECK_THROWS_AS(ForcingProfile::power_decay_bump(-2, 14, 1), DomainError);
  }

  TEST_CASE("compact bump support") {
    const auto f = ForcingProfile::compact_bump(1, 3, 2);
    CHECK(f.eval(0.5) == 0);
    CHECK(f.eval(3.5) == 0);
    CHECK(f.eval(2) == doctest::Approx(2));
  }

  TEST_CASE("asymptotics check accepts the reference forcing") {
    const auto spec = make_problem(13, 2, CoefficientProfile::pure_power(0, 1),
                                   ForcingProfile::power_decay_bump(0, 14, 1), 1);
    const auto rep = verify_asymptotics(spec);
    CHECK(rep.ok());
    CHECK(rep.integral_near > 0);
    CHECK(rep.integral_far > 0);
  }

  TEST_CASE("slowly decaying forcing is rejected") {
    const auto spec = make_problem(13, 2, CoefficientProfile::pure_power(0, 1),
                                   ForcingProfile::power_decay_bump(0, 5, 1), 1);
    CHECK_FALSE(verify_asymptotics(spec).ok());
  }
}
