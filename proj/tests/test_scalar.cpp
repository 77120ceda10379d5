#include <catch_amalgamated.hpp>

#include "twospin/errors.hpp"
#include "twospin/scalar.hpp"

using namespace twospin;
using Catch::Approx;

TEST_CASE("parse_rational reads decimals, exponents and fractions exactly") {
  CHECK(parse_rational("0.8") == mpq_class(4, 5));
  CHECK(parse_rational("-1.25e-3") == mpq_class(-1, 800));
  CHECK(parse_rational("7/6") == mpq_class(7, 6));
  CHECK(parse_rational("12") == mpq_class(12));
  CHECK(parse_rational("2E2") == mpq_class(200));
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational(""), DomainError);
}

TEST_CASE("square roots reduce to square-free radicands") {
  const QuadraticNumber r = QuadraticNumber::sqrt_of(8);
  CHECK(r.coefficient() == 2);
  CHECK(r.radicand() == 2);
  CHECK(r.str() == "2*sqrt(2)");
  CHECK(QuadraticNumber::sqrt_of(mpq_class(9, 4)).is_rational());
  CHECK(QuadraticNumber::sqrt_of(mpq_class(9, 4)) == QuadraticNumber(mpq_class(3, 2)));
  // sqrt(5/2) = sqrt(10)/2
  const QuadraticNumber s = QuadraticNumber::sqrt_of(mpq_class(5, 2));
  CHECK(s.radicand() == 10);
  CHECK(s.coefficient() == mpq_class(1, 2));
  CHECK(s * s == QuadraticNumber(mpq_class(5, 2)));
}

TEST_CASE("field arithmetic in Q(sqrt 2) is exact") {
  const QuadraticNumber r2 = QuadraticNumber::sqrt_of(2);
  const QuadraticNumber x = QuadraticNumber(1) + r2;
  CHECK(x * (r2 - QuadraticNumber(1)) == QuadraticNumber(1));
  CHECK(QuadraticNumber(1) / x == r2 - QuadraticNumber(1));
  CHECK((x * x).str() == "3 + 2*sqrt(2)");
  CHECK(ipow(r2, 4) == QuadraticNumber(4));
  CHECK(ipow(r2, -2) == QuadraticNumber(mpq_class(1, 2)));
  CHECK(x.to_double() == Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("sign and ordering are exact near cancellation") {
  const QuadraticNumber r2 = QuadraticNumber::sqrt_of(2);
  // 1393/985 < sqrt(2) < 577/408
  CHECK(QuadraticNumber(mpq_class(1393, 985)) < r2);
  CHECK(r2 < QuadraticNumber(mpq_class(577, 408)));
  CHECK((r2 * QuadraticNumber(408) - QuadraticNumber(577)).sign() < 0);
  CHECK((r2 - r2).sign() == 0);
  CHECK(abs(QuadraticNumber(1) - r2) == r2 - QuadraticNumber(1));
}

TEST_CASE("mixing radicands is rejected") {
  const QuadraticNumber r2 = QuadraticNumber::sqrt_of(2);
  const QuadraticNumber r3 = QuadraticNumber::sqrt_of(3);
  CHECK_THROWS_AS(r2 + r3, DomainError);
  CHECK_THROWS_AS(sqrt(r2), DomainError);
  CHECK_THROWS_AS(QuadraticNumber(1) / QuadraticNumber(0), DomainError);
}

TEST_CASE("double conversions go through the shortest decimal") {
  CHECK(to_string(0.8) == "0.8");
  CHECK(to_string(1.0 / 3.0) == "0.3333333333333333");
  CHECK(scalar_from_double<QuadraticNumber>(0.8) == QuadraticNumber(mpq_class(4, 5)));
  CHECK(scalar_from_text<double>("0.1") == 0.1);
  CHECK(scalar_from_text<double>("7/6") == Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(scalar_from_text<QuadraticNumber>("1.01") == QuadraticNumber(mpq_class(101, 100)));
}
