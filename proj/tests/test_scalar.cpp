#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lml/scalar.hpp"

using lml::Rat;
using lml::Scalar;

namespace {

// Restores the global construction policy when a test section exits.
struct PolicyGuard {
  lml::ScalarPolicy saved = lml::scalar_policy();
  ~PolicyGuard() { lml::set_scalar_policy(saved); }
};

double rel_err(const Scalar& s, double want) {
  return std::fabs(s.to_double() - want) / std::fabs(want);
}

}  // namespace

TEST_SUITE("scalar") {

TEST_CASE("parse_rat accepts fractions, integers and decimals") {
  CHECK(lml::parse_rat("3/2") == Rat(3, 2));
  CHECK(lml::parse_rat("0.75") == Rat(3, 4));
  CHECK(lml::parse_rat("2.5") == Rat(5, 2));
  CHECK(lml::parse_rat("-4") == Rat(-4));
  CHECK(lml::parse_rat(" 7 ") == Rat(7));
  CHECK_THROWS_AS(lml::parse_rat("x"), std::invalid_argument);
  CHECK_THROWS_AS(lml::parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(lml::parse_rat(""), std::invalid_argument);
}

TEST_CASE("floor_log2 is exact on both sides of powers of two") {
  CHECK(lml::floor_log2(Rat(1)) == 0);
  CHECK(lml::floor_log2(Rat(3, 2)) == 0);
  CHECK(lml::floor_log2(Rat(2)) == 1);
  CHECK(lml::floor_log2(Rat(1, 3)) == -2);
  CHECK(lml::floor_log2(Rat(1024)) == 10);
  CHECK(lml::floor_log2(Rat(1023)) == 9);
  CHECK(lml::floor_log2(Rat(1, 1024)) == -10);
}

TEST_CASE("plain rational arithmetic stays rational") {
  Scalar a = Scalar::from_rat(Rat(3, 7));
  Scalar b = Scalar::from_rat(Rat(2, 7));
  Scalar s = a + b;
  REQUIRE(s.is_rational());
  CHECK(s.as_rat() == Rat(5, 7));
  CHECK((Scalar::from_rat(5) - Scalar::from_rat(2)).as_rat() == Rat(3));
  CHECK((Scalar::from_rat(Rat(5, 3)) * Scalar::from_rat(6)).as_rat() == Rat(10));
  CHECK((Scalar::zero() + a).as_rat() == Rat(3, 7));
  CHECK(Scalar::zero().is_zero());
}

TEST_CASE("perfect powers collapse to rationals") {
  CHECK(Scalar::rat_pow(4, Rat(1, 2)).as_rat() == Rat(2));
  CHECK(Scalar::rat_pow(8, Rat(2, 3)).as_rat() == Rat(4));
  // 59049 = 3^10, so its fifth root is 9.
  CHECK(Scalar::rat_pow(59049, Rat(1, 5)).as_rat() == Rat(9));
  CHECK(Scalar::rat_pow(Rat(9, 4), Rat(1, 2)).as_rat() == Rat(3, 2));
}

TEST_CASE("irrational powers round trip exactly") {
  Scalar r2 = Scalar::rat_pow(2, Rat(1, 2));
  CHECK_FALSE(r2.is_rational());
  CHECK_THROWS_AS(r2.as_rat(), std::logic_error);
  CHECK((r2 * r2).as_rat() == Rat(2));

  Scalar x = Scalar::rat_pow(Rat(3, 2), Rat(2, 3));
  CHECK(x.pow(3).as_rat() == Rat(9, 4));
  CHECK(x.pow(Rat(3, 2)).as_rat() == Rat(3, 2));
}

TEST_CASE("gcd refinement recognizes equal radicals") {
  Scalar lhs = Scalar::rat_pow(6, Rat(1, 2)) * Scalar::rat_pow(10, Rat(1, 2));
  Scalar rhs = Scalar::from_rat(2) * Scalar::rat_pow(15, Rat(1, 2));
  CHECK(lhs == rhs);
  CHECK(lhs.cmp(rhs) == 0);

  // sqrt(8) = 2 sqrt(2) is already canonical at insertion.
  Scalar s = Scalar::rat_pow(2, Rat(1, 2)) + Scalar::rat_pow(8, Rat(1, 2));
  CHECK(s == Scalar::from_rat(3) * Scalar::rat_pow(2, Rat(1, 2)));
  CHECK(s.is_exact());

  // sqrt(18) - sqrt(2) = 2 sqrt(2) needs the refinement to see the ratio.
  Scalar d = Scalar::rat_pow(18, Rat(1, 2)) - Scalar::rat_pow(2, Rat(1, 2));
  CHECK(d == Scalar::from_rat(2) * Scalar::rat_pow(2, Rat(1, 2)));
}

TEST_CASE("incommensurable sums fall back to the log tier") {
  Scalar s = Scalar::rat_pow(3, Rat(1, 2)) + Scalar::rat_pow(5, Rat(1, 2));
  CHECK_FALSE(s.is_exact());
  CHECK(rel_err(s, std::sqrt(3.0) + std::sqrt(5.0)) < 1e-14);

  Scalar d = Scalar::rat_pow(5, Rat(1, 2)) - Scalar::rat_pow(3, Rat(1, 2));
  CHECK(rel_err(d, std::sqrt(5.0) - std::sqrt(3.0)) < 1e-13);
}

TEST_CASE("subtraction is a checked monus") {
  CHECK_THROWS_AS(Scalar::from_rat(2) - Scalar::from_rat(5), std::domain_error);
  Scalar r2 = Scalar::rat_pow(2, Rat(1, 2));
  CHECK((r2 - r2).is_zero());
  CHECK_THROWS_AS(Scalar::zero() - r2, std::domain_error);
  CHECK_THROWS_AS(r2 / Scalar::zero(), std::domain_error);
}

TEST_CASE("magnitudes far beyond double range stay exact") {
  Scalar big = Scalar::pow2(100000) * Scalar::pow2(-99990);
  CHECK(big == Scalar::pow2(10));
  CHECK(Scalar::pow2(4096).pow(Rat(1, 2)) == Scalar::pow2(2048));
  CHECK(Scalar::pow2(100001) > Scalar::pow2(100000));

  Scalar lg = Scalar::from_log2(1e6) / Scalar::from_log2(1e6 - 10.0);
  CHECK(lg.cmp(Scalar::pow2(10)) == 0);
}

TEST_CASE("comparisons order mixed representations") {
  CHECK(Scalar::rat_pow(2, Rat(1, 2)) < Scalar::from_rat(Rat(3, 2)));
  CHECK(Scalar::from_rat(Rat(7, 5)) < Scalar::rat_pow(2, Rat(1, 2)));
  CHECK(Scalar::zero() < Scalar::from_rat(Rat(1, 1000000)));
  CHECK(Scalar::from_log2(3.0) == Scalar::pow2(3));
}

TEST_CASE("construction policies") {
  PolicyGuard guard;

  lml::set_scalar_policy(lml::ScalarPolicy::Log);
  Scalar v = Scalar::from_rat(Rat(3, 4));
  CHECK_FALSE(v.is_exact());
  CHECK(rel_err(v, 0.75) < 1e-15);

  lml::set_scalar_policy(lml::ScalarPolicy::Exact);
  Scalar a = Scalar::rat_pow(3, Rat(1, 2));
  Scalar b = Scalar::rat_pow(5, Rat(1, 2));
  CHECK_THROWS_AS(a + b, std::runtime_error);
  // Rational pipelines keep working in exact mode.
  CHECK((Scalar::from_rat(Rat(1, 3)) + Scalar::from_rat(Rat(1, 6))).as_rat() ==
        Rat(1, 2));
}

}  // TEST_SUITE
