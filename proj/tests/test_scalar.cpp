#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "momentdet/scalar.hpp"

using namespace momentdet;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/7") == Rational(3, 7));
  CHECK(parse_rational("-12") == Rational(-12));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1.5e2") == Rational(150));
  CHECK(parse_rational("25e-2") == Rational(1, 4));
  CHECK(rational_to_string(Rational(-3, 7)) == "-3/7");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("rat_pow") {
  CHECK(rat_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rat_pow(Rational(5), 0) == Rational(1));
  CHECK(rat_pow(Rational(-2), 2) == Rational(4));
}

TEST_CASE("scalar arithmetic promotes modes") {
  PrecisionGuard guard(128);
  Scalar a{Rational(1, 3)};
  Scalar b{Rational(1, 6)};
  Scalar c = a + b;
  REQUIRE(c.is_rational());
  CHECK(c.rat() == Rational(1, 2));

  Scalar f{Real(0.5)};
  Scalar mixed = a + f;
  CHECK_FALSE(mixed.is_rational());
  CHECK(abs(mixed.real() - Real(5) / Real(6)) < Real("1e-30"));

  CHECK((a * b).rat() == Rational(1, 18));
  CHECK((a / b).rat() == Rational(2));
  CHECK((-a).rat() == Rational(-1, 3));
  CHECK(a > b);
  CHECK(Scalar(Rational(-1)).is_negative());
  CHECK(Scalar(Rational(-1)).abs() == Scalar(1));
}

TEST_CASE("scalar string round trip") {
  Scalar q{Rational(22, 7)};
  CHECK(Scalar::parse(q.to_string(), ScalarMode::kRational) == q);
  PrecisionGuard guard(192);
  Scalar x{Real("3.14159265358979323846264338327950288")};
  Scalar back = Scalar::parse(x.to_string(), ScalarMode::kFloat);
  CHECK(abs(back.real() - x.real()) < Real("1e-35"));
}

TEST_CASE("power values compare exactly across roots") {
  PowerValue two(Rational(2), 1);
  PowerValue four_sqrt(Rational(4), 2);
  CHECK(two == four_sqrt);

  PowerValue cbrt9(Rational(9), 3);   // 9^(1/3) ~ 2.0801
  PowerValue sqrt4(Rational(4), 2);   // 2
  CHECK(cbrt9.compare(sqrt4) == std::strong_ordering::greater);

  // (8)^(1/3) / (4)^(1/2) == 1
  CHECK(PowerValue(Rational(8), 3).div(PowerValue(Rational(4), 2)) ==
        PowerValue(Rational(1), 1));

  PrecisionGuard guard(256);
  Real r = PowerValue(Rational(2), 2).to_real();
  CHECK(abs(r * r - Real(2)) < Real("1e-70"));
  CHECK_THROWS(PowerValue(Rational(-1), 2));
  CHECK_THROWS(PowerValue(Rational(1), 0));
}

TEST_CASE("precision guard controls working precision") {
  PrecisionGuard outer(64);
  Real a = Real(1) / Real(3);
  {
    PrecisionGuard inner(512);
    Real b = Real(1) / Real(3);
    CHECK(b.precision() >= digits10_for_bits(512) - 1);
  }
  CHECK(Real(1).precision() <= digits10_for_bits(64) + 1);
  (void)a;
}
