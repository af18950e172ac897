#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "wlspec/error.hpp"
#include "wlspec/weights.hpp"

using namespace wlspec;

TEST_CASE("closed-form values") {
  const auto lin = parse_profile("linear_neg:2");
  CHECK(lin(1.5) == doctest::Approx(-3.0));
  CHECK(lin.d1(0.3) == doctest::Approx(-2.0));
  CHECK(lin.label() == "linear_neg:2");

  const auto q = parse_profile("quad_neg:0.3");
  CHECK(q(2.0) == doctest::Approx(-1.2));
  CHECK(q.d2(5.0) == doctest::Approx(-0.6));
  CHECK(q.density(1.0) == doctest::Approx(std::exp(0.3)));

  const auto e = parse_profile("exp_dec");
  CHECK(e(0.0) == doctest::Approx(1.0));
  CHECK(e(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(e.label() == "exp_dec");
  CHECK(parse_profile("exp_dec:2").label() == "exp_dec:2");

  const auto lc = parse_profile("log_cos");
  CHECK(lc(std::numbers::pi / 3) == doctest::Approx(std::log(2.0)));
  CHECK(lc.d1(std::numbers::pi / 4) == doctest::Approx(1.0));
  CHECK(lc.domain_sup() == doctest::Approx(std::numbers::pi / 2));

  const auto z = parse_profile("zero");
  CHECK(z(3.0) == 0.0);
  CHECK(z.density(3.0) == 1.0);
  CHECK(std::isinf(z.domain_sup()));
}

TEST_CASE("derivatives agree with finite differences") {
  for (const char* spec : {"zero", "linear_neg:1", "quad_neg:0.3", "exp_dec", "exp_dec:3", "log_cos"}) {
    CAPTURE(spec);
    const auto p = parse_profile(spec);
    const auto c = derivative_consistency(p, 200, std::min(3.0, p.domain_sup()));
    CHECK(c.d1_error < 1e-6);
    CHECK(c.d2_error < 1e-6);
  }
}

TEST_CASE("built-ins satisfy their documented classes") {
  for (const char* name : {"zero", "linear_neg", "quad_neg", "exp_dec", "log_cos"}) {
    CAPTURE(name);
    const auto p = parse_profile(name);
    const double tmax = std::min(4.0, p.domain_sup());
    const auto v = check_admissibility(p, claimed_class(name), 2000, tmax);
    CHECK(v.pass);
    CHECK_FALSE(v.witness.has_value());
  }
}

TEST_CASE("violations report a witness") {
  const auto e = parse_profile("exp_dec");
  auto v = check_admissibility(e, AdmissibilityClass{Admissibility::Concave}, 100, 2.0);
  CHECK_FALSE(v.pass);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness == doctest::Approx(0.0));
  CHECK(v.failed == Admissibility::Concave);

  const auto lc = parse_profile("log_cos");
  v = check_admissibility(lc, AdmissibilityClass{Admissibility::NonIncreasing}, 100, 1.0);
  CHECK_FALSE(v.pass);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness > 0.0);
  CHECK(lc.d1(*v.witness) > 0.0);

  // The zero weight is concave but not strictly so.
  v = check_admissibility(parse_profile("zero"), AdmissibilityClass{Admissibility::StrictlyConcave}, 50, 1.0);
  CHECK_FALSE(v.pass);
  CHECK(v.failed == Admissibility::StrictlyConcave);

  v = check_admissibility(parse_profile("quad_neg:1"), AdmissibilityClass{Admissibility::LogCosHemisphere}, 50, 1.0);
  CHECK_FALSE(v.pass);
  CHECK(v.failed == Admissibility::LogCosHemisphere);

  v = check_admissibility(parse_profile("quad_neg:1"), AdmissibilityClass{Admissibility::Convex}, 50, 1.0);
  CHECK_FALSE(v.pass);
}

TEST_CASE("BBMP condition") {
  // exp_dec: g(z) = (e^{-e^{-z^{1/2}}} - e^{-1}) z^{1/2} bends the wrong way somewhere.
  const auto lin = builtin_profile("exp_dec", 1.0);
  AdmissibilityClass bbmp{Admissibility::BbmpConvexity};
  CHECK(check_admissibility(parse_profile("quad_neg:0.5"), bbmp, 500, 3.0).pass);
  CHECK(check_admissibility(parse_profile("linear_neg:1"), bbmp, 500, 3.0).pass);
  const auto v = check_admissibility(lin, bbmp, 500, 3.0);
  CHECK_FALSE(v.pass);
  CHECK(v.failed == Admissibility::BbmpConvexity);
}

TEST_CASE("strict concavity implies concavity") {
  AdmissibilityClass c{Admissibility::StrictlyConcave};
  CHECK(c.has(Admissibility::Concave));
  CHECK(c.describe() == "concave+strictly_concave");
  CHECK(AdmissibilityClass{}.describe() == "none");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_profile("cubic"), Error);
  CHECK_THROWS_AS(parse_profile("quad_neg:"), Error);
  CHECK_THROWS_AS(parse_profile("quad_neg:x"), Error);
  CHECK_THROWS_AS(parse_profile("quad_neg:-1"), Error);
  CHECK_THROWS_AS(parse_profile("linear_neg:0"), Error);
  CHECK_THROWS_AS(claimed_class("cubic"), Error);
  try {
    parse_profile("bogus");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("sampling range must lie in the domain") {
  const auto lc = parse_profile("log_cos");
  CHECK_THROWS_AS(check_admissibility(lc, claimed_class("log_cos"), 100, 2.0), Error);
  CHECK_NOTHROW(check_admissibility(lc, claimed_class("log_cos"), 100, std::numbers::pi / 2));
  CHECK_THROWS_AS(check_admissibility(lc, claimed_class("log_cos"), 5, 1.0), Error);
}
