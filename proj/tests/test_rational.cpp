#include <doctest.h>

#include "heisen/rational.hpp"

using heisen::Rational;

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("2/5") == Rational(2, 5));
  CHECK(Rational::parse("-3/6") == Rational(-1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("0.4") == Rational(2, 5));
  CHECK(Rational::parse("-1.25") == Rational(-5, 4));
  CHECK_THROWS(Rational::parse("x/y"));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational::parse("1/0"));
  // exponents and trailing text belong to the floating path
  CHECK_THROWS(Rational::parse("1e-3"));
  CHECK_THROWS(Rational::parse("2/5zebra"));
  CHECK_THROWS(Rational::parse("0.4e2"));
}

TEST_CASE("rational arithmetic is normalized and exact") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK(a < Rational(1, 2));
  CHECK(abs(Rational(-2, 7)) == Rational(2, 7));
  CHECK(Rational(4, 8) == Rational(1, 2));
  CHECK(Rational(3, -9) == Rational(-1, 3));
}

TEST_CASE("rational overflow is detected, not wrapped") {
  Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  // near-limit values that cancel are fine
  Rational x(INT64_MAX / 4, 3);
  CHECK(x - x == Rational(0));
}

TEST_CASE("rational works inside Eigen containers") {
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> m(2, 2);
  m << Rational(0), Rational(1), Rational(-1), Rational(0);
  Eigen::Matrix<Rational, Eigen::Dynamic, 1> v(2);
  v << Rational(2, 5), Rational(3, 5);
  auto w = (m * v).eval();
  CHECK(w[0] == Rational(3, 5));
  CHECK(w[1] == Rational(-2, 5));
  CHECK(v.sum() == Rational(1));
}
