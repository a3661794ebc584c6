#include <doctest.h>

#include "heisen/skew.hpp"
#include "helpers.hpp"

using namespace heisen;
using namespace heisen::skew;

TEST_CASE("skew apply on the reference examples") {
  auto rot = testutil::rotationMap(0.4, 0.6);
  Eigen::VectorXd h(2), b(2);
  h << 1, 1;
  b << 0, 0;
  auto sp = bundle::buildSkewProduct(rot, h, b);
  auto r = skewApply(sp, {0.1, 0.0});
  CHECK(r.point.x == doctest::Approx(0.7));
  CHECK(r.point.rho == doctest::Approx(0.1));
  auto r2 = skewApply(sp, {0.5, 0.25});
  CHECK(r2.point.x == doctest::Approx(0.1));
  CHECK(r2.point.rho == doctest::Approx(0.35));

  auto sp3 = testutil::threeExampleSkew();
  auto r3 = skewApply(sp3, {0.1, 0.0});
  CHECK(r3.point.x == doctest::Approx(0.7));
  CHECK(r3.point.rho == doctest::Approx(0.9));
}

TEST_CASE("offsets land exactly at interval left endpoints") {
  auto rot = testutil::rotationMap(0.4, 0.6);
  Eigen::VectorXd h(2), b(2);
  h << 1, 1;
  b << 0.5, 0.5;
  auto sp = bundle::buildSkewProduct(rot, h, b);
  auto r = skewApply(sp, {0.4, 0.0});  // x = dI_B exactly: zero slope term
  CHECK(r.point.rho == doctest::Approx(0.5));
}

TEST_CASE("fiber rotation equivariance") {
  auto sp = testutil::threeExampleSkew();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const double x = uniform01(rng), rho = uniform01(rng), c = uniform01(rng);
    auto a = skewApply(sp, {x, wrap01(rho + c)});
    auto b = skewApply(sp, {x, rho});
    CHECK(a.point.x == doctest::Approx(b.point.x));
    CHECK(circDist(a.point.rho, wrap01(b.point.rho + c)) < 1e-12);
  }
}

TEST_CASE("skewing sums satisfy the cocycle identity") {
  auto sp = testutil::goldenSkew();
  CHECK(birkhoffSkewingSum(sp, 0.1, 0).value == doctest::Approx(0.0));
  CHECK(birkhoffSkewingSum(sp, 0.1, 1).value == doctest::Approx(0.1));
  // two steps: g(0.1) + g(0.718034) with the second point in the B piece
  const double expected = 0.1 + (0.1 + testutil::kGoldenAlpha) -
                          (1.0 - testutil::kGoldenAlpha);
  CHECK(birkhoffSkewingSum(sp, 0.1, 2).value == doctest::Approx(expected));
}

TEST_CASE("iterated skew equals base power plus skewing sum") {
  auto sp = testutil::threeExampleSkew();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = uniform01(rng), rho0 = uniform01(rng);
    SkewPoint p{x0, rho0};
    for (int n = 1; n <= 1000; ++n) {
      p = skewApply(sp, p).point;
      if (n == 1 || n == 10 || n == 100 || n == 1000) {
        auto gsum = birkhoffSkewingSum(sp, x0, n);
        auto base = iet::ietOrbit<double>(sp.base, x0, n);
        CHECK(std::abs(p.x - base.points.back()) < 1e-9);
        CHECK(circDist(p.rho, wrap01(rho0 + gsum.value)) < 1e-9);
      }
    }
  }
}

TEST_CASE("mode observables transform within their mode") {
  auto sp = testutil::goldenSkew();
  const int m = 2;
  auto obs = ModeObservable::constant(m);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const double x = uniform01(rng), rho = uniform01(rng);
    auto img = skewApply(sp, {x, rho});
    const Complex lhs = obs(img.point.x, img.point.rho);
    const Complex rhs = unitPhase(m * birkhoffSkewingSum(sp, x, 1).value) *
                        obs.baseFn(iet::ietApply(sp.base, x).value) *
                        unitPhase(m * rho);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("birkhoff average of a constant is the constant") {
  auto sp = testutil::goldenSkew();
  auto obs = ModeObservable::constant(0, Complex(0.7, -0.2));
  auto r = birkhoffAverage(sp, obs, {0.123, 0.456}, 1000);
  CHECK(std::abs(r.mean - Complex(0.7, -0.2)) < 1e-12);
}

TEST_CASE("birkhoff average of a nonzero mode decays on the golden torus") {
  auto sp = testutil::goldenSkew();
  auto obs = ModeObservable::constant(1);
  auto r = birkhoffAverage(sp, obs, {0.3, 0.0}, 1000000);
  CHECK(std::abs(r.mean) <= 0.05);
  CHECK(r.trace.size() >= 20);  // dyadic checkpoints present
}

TEST_CASE("birkhoff average of a zero-mode indicator finds its mass") {
  auto sp = testutil::goldenSkew();
  const double lamA = 1.0 - testutil::kGoldenAlpha;
  auto obs = ModeObservable::indicator(0, 0.0, lamA);
  const int n = 100000;
  auto r = birkhoffAverage(sp, obs, {0.3, 0.0}, n);
  CHECK(std::abs(r.mean.real() - lamA) < 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("mode projection recovers pure modes") {
  auto grid = 16;
  // f = cos(2 pi rho): the first-mode coefficient is 1/2
  auto c1 = modeProject(
      [](double, double rho) { return Complex(std::cos(kTwoPi * rho), 0.0); }, 1,
      grid);
  CHECK(std::abs(c1(0.3) - Complex(0.5, 0.0)) < 1e-12);

  // rho-independent f projects onto mode zero only
  auto f0 = [](double x, double) { return Complex(x, 0.0); };
  CHECK(std::abs(modeProject(f0, 0, grid)(0.4) - Complex(0.4, 0.0)) < 1e-12);
  CHECK(std::abs(modeProject(f0, 3, grid)(0.4)) < 1e-12);

  // mode-two content with an x profile is recovered at grid exactness
  auto f2 = [](double x, double rho) {
    return Complex(std::sin(kTwoPi * x), 0.0) * unitPhase(2 * rho);
  };
  CHECK(std::abs(modeProject(f2, 2, grid)(0.2) -
                 Complex(std::sin(kTwoPi * 0.2), 0.0)) < 1e-12);

  CHECK_THROWS_AS(modeProject(f0, 4, 16), Error);  // needs 4|n|+4 = 20
}

TEST_CASE("discrepancy of degenerate and uniform point sets") {
  std::vector<SkewPoint> same(1000, SkewPoint{0.11, 0.17});
  CHECK(discrepancy2d(same, 1.0) > 0.9);

  std::vector<SkewPoint> lattice;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      lattice.push_back(SkewPoint{i / 64.0, j / 64.0});
  CHECK(discrepancy2d(lattice, 1.0) <= 2.0 / 64.0 + 1e-12);
}

TEST_CASE("golden skew orbit equidistributes") {
  auto sp = testutil::goldenSkew();
  auto orbit = skewOrbit(sp, {0.123456789, 0.0}, 1000000);
  CHECK(orbit.reliable);
  CHECK(discrepancy2d(orbit.points, 1.0) <= 0.01);
}

TEST_CASE("skew product preserves the product measure (chi-square)") {
  auto sp = testutil::threeExampleSkew();
  std::mt19937_64 rng(2718);
  constexpr int kCells = 32;
  const int n = 1000000;
  std::vector<double> counts(kCells * kCells, 0.0);
  for (int i = 0; i < n; ++i) {
    SkewPoint p{uniform01(rng) * sp.base.total(), uniform01(rng)};
    p = skewApply(sp, p).point;
    const int cx = std::min(kCells - 1,
                            static_cast<int>(p.x / sp.base.total() * kCells));
    const int cr = std::min(kCells - 1, static_cast<int>(p.rho * kCells));
    counts[cx * kCells + cr] += 1.0;
  }
  const double expect = static_cast<double>(n) / (kCells * kCells);
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  const double dof = kCells * kCells - 1;
  CHECK(std::abs(chi2 - dof) < 5.0 * std::sqrt(2.0 * dof));
}
