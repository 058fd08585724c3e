#include "doctest.h"
#include "radsing/io.hpp"
#include "radsing/shooting.hpp"

using namespace radsing;

TEST_SUITE("io") {
  TEST_CASE("FNV-1a 64 reference vectors") {
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
  }

  TEST_CASE("non-finite numbers") {
    CHECK(io::number(INFINITY) == "inf");
    CHECK(io::number(-INFINITY) == "-inf");
    CHECK(io::number(NAN) == "nan");
    CHECK(std::isinf(io::to_double(io::number(INFINITY))));
    CHECK(io::to_double(io::number(0.1)) == 0.1);
  }

  TEST_CASE("trajectory files round-trip byte for byte") {
    const auto spec = make_problem(13, 2, CoefficientProfile::pure_power(0, 1),
                                   ForcingProfile::power_decay_bump(0, 14, 1), 3e4);
    const RadialSolution sol = regular_solve(spec, 1.0, 100);
    const auto rec = io::to_record(sol);
    CHECK(rec.termination == "hit_zero");
    REQUIRE(rec.r0);

    const std::string csv = io::trajectory_csv(rec.samples);
    CHECK(csv.rfind("r,u,du\n", 0) == 0);
    CHECK(io::trajectory_csv(io::parse_trajectory_csv(csv)) == csv);

    const std::string js = io::trajectory_json(rec).dump(1);
    const auto back = io::parse_trajectory_json(io::json::parse(js));
    CHECK(io::trajectory_json(back).dump(1) == js);
    CHECK(*back.r0 == *rec.r0);
  }

  TEST_CASE("malformed trajectory CSV") {
    CHECK_THROWS(io::parse_trajectory_csv("r,u,du\n1,2\n"));
    CHECK_THROWS(io::parse_trajectory_csv("r,u,du\nx,2,3\n"));
  }
}
