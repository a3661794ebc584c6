#include <doctest.h>

#include "heisen/linalg.hpp"
#include "heisen/lp.hpp"

using heisen::Rational;
namespace la = heisen::linalg;
namespace lp = heisen::lp;

TEST_CASE("rank and nullspace over rationals") {
  la::MatrixX<Rational> a(3, 3);
  a << Rational(0), Rational(1), Rational(1),
       Rational(-1), Rational(0), Rational(0),
       Rational(-1), Rational(0), Rational(0);
  CHECK(la::rank<Rational>(a) == 2);
  auto ns = la::nullspace<Rational>(a);
  REQUIRE(ns.size() == 1);
  auto residual = (a * ns[0]).eval();
  for (int i = 0; i < 3; ++i) CHECK(residual[i].isZero());
}

TEST_CASE("rank and nullspace over doubles") {
  la::MatrixX<double> a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  CHECK(la::rank<double>(a) == 1);
  CHECK(la::nullspace<double>(a).size() == 2);
}

TEST_CASE("consistent and inconsistent solves") {
  la::MatrixX<double> a(2, 2);
  a << 1, 1, 2, 2;
  la::VectorX<double> good(2), bad(2);
  good << 1, 2;
  bad << 1, 3;
  auto x = la::solveConsistent<double>(a, good);
  REQUIRE(x.has_value());
  CHECK(((a * *x) - good).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(la::solveConsistent<double>(a, bad).has_value());
}

TEST_CASE("maximin slack LP: interval intersection in one variable") {
  // y + 2 >= t, -y + 2 >= t  -> best y = 0, t = 2, capped at 1
  la::MatrixX<double> g(2, 1);
  g << 1, -1;
  la::VectorX<double> rhs(2);
  rhs << 2, 2;
  auto r = lp::maximinSlack<double>(g, rhs, 1.0);
  REQUIRE(r.feasible);
  CHECK(r.slack == doctest::Approx(1.0));

  // y - 3 >= t and -y - 1 >= t: best at y = -1? slack = min(y-3, -y-1):
  // maximize min -> y = 1? min(-2, -2) = -2: infeasible strictly.
  rhs << -3, -1;
  auto r2 = lp::maximinSlack<double>(g, rhs, 1.0);
  REQUIRE(r2.feasible);
  CHECK(r2.slack == doctest::Approx(-2.0));
  CHECK(r2.point[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("maximin slack LP exact over rationals") {
  la::MatrixX<Rational> g(2, 1);
  g(0, 0) = Rational(1);
  g(1, 0) = Rational(-1);
  la::VectorX<Rational> rhs(2);
  rhs[0] = Rational(1, 3);
  rhs[1] = Rational(1, 5);
  auto r = lp::maximinSlack<Rational>(g, rhs, Rational(10));
  REQUIRE(r.feasible);
  // min(y + 1/3, -y + 1/5) maximized at y = -1/15, value 4/15
  CHECK(r.slack == Rational(4, 15));
  CHECK(r.point[0] == Rational(-1, 15));
}

TEST_CASE("maximin slack with no free variables") {
  la::MatrixX<double> g(3, 0);
  la::VectorX<double> rhs(3);
  rhs << 0.5, 0.2, 0.9;
  auto r = lp::maximinSlack<double>(g, rhs, 1.0);
  REQUIRE(r.feasible);
  CHECK(r.slack == doctest::Approx(0.2));
}
