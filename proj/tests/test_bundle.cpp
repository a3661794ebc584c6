#include <doctest.h>

#include "heisen/bundle.hpp"
#include "heisen/flow.hpp"
#include "helpers.hpp"

using namespace heisen;
using namespace heisen::bundle;

TEST_CASE("weil integrality") {
  Eigen::VectorXd lam(2), h(2);
  lam << 0.4, 0.6;
  h << 1, 1;
  CHECK(weilCheck(lam, h));
  h << 1, 2;
  CHECK_FALSE(weilCheck(lam, h));  // area 1.6
  h << 0, 0;
  CHECK(weilCheck(lam, h));  // rejected upstream by positivity
}

TEST_CASE("rectangle holonomy is area mod one") {
  CHECK(rectHolonomy(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(rectHolonomy(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(rectHolonomy(0.0, 3.7) == doctest::Approx(0.0));
}

TEST_CASE("admissible b space of the torus is unconstrained") {
  auto map = testutil::goldenMap();
  Eigen::VectorXd h(2);
  h << 1, 1;
  CHECK(admissibleBSpace(map.spec, h).empty());
}

TEST_CASE("admissible b space of the three-interval example") {
  auto map = testutil::threeExampleMap();
  Eigen::VectorXd h(3);
  h << 2, 2, 2;
  auto cs = admissibleBSpace(map.spec, h);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].coeffs[0] == doctest::Approx(0.0));
  CHECK(cs[0].coeffs[1] == doctest::Approx(1.0));
  CHECK(cs[0].coeffs[2] == doctest::Approx(-1.0));
  CHECK(cs[0].rhs == doctest::Approx(0.4));  // -lambda_B h_B = -0.6 mod 1
}

TEST_CASE("single-cycle pairs have an unconstrained offset space") {
  auto map = testutil::reversing4Map();
  auto s = sampleAdmissible(map.spec, 11);
  CHECK(admissibleBSpace(map.spec, s.h).empty());
  CHECK(isAdmissible(map.spec, s.h, Eigen::Vector4d{0.9, 0.1, 0.5, 0.3})
            .admissible());
}

TEST_CASE("admissible b space rejects non-integral area") {
  auto map = testutil::threeExampleMap();
  Eigen::VectorXd h(3);
  h << 2, 2, 2.5;
  CHECK_THROWS_AS(admissibleBSpace(map.spec, h), Error);
}

TEST_CASE("admissibility report on the reference offsets") {
  auto map = testutil::threeExampleMap();
  Eigen::VectorXd h(3), b(3);
  h << 2, 2, 2;
  b << 0.7, 0.4, 0.0;
  auto rep = isAdmissible(map.spec, h, b);
  CHECK(rep.admissible());
  b << 0, 0, 0;
  auto rep2 = isAdmissible(map.spec, h, b);
  CHECK_FALSE(rep2.admissible());
  CHECK(rep2.constraintResiduals[0] == doctest::Approx(0.4));
}

TEST_CASE("torus admissibility holds for any offsets") {
  auto map = testutil::goldenMap();
  Eigen::VectorXd h(2), b(2);
  h << 1, 1;
  b << 0.37, 0.91;
  CHECK(isAdmissible(map.spec, h, b).admissible());
}

TEST_CASE("sampling the admissible space is deterministic and valid") {
  auto map = testutil::threeExampleMap();
  auto s1 = sampleAdmissible(map.spec, 42);
  auto s2 = sampleAdmissible(map.spec, 42);
  CHECK(s1.h == s2.h);
  CHECK(s1.b == s2.b);
  auto rep = isAdmissible(map.spec, s1.h, s1.b);
  CHECK(rep.admissible());
  CHECK(rep.constraintResiduals[0] < 1e-12);

  auto s3 = sampleAdmissible(map.spec, 43);
  CHECK(s3.b != s1.b);
}

TEST_CASE("two admissible offset vectors differ by a homogeneous solution") {
  auto map = testutil::threeExampleMap();
  Eigen::VectorXd h(3);
  h << 2, 2, 2;
  Eigen::VectorXd b1(3), b2(3);
  b1 << 0.7, 0.4, 0.0;
  b2 << 0.1, 0.9, 0.5;
  REQUIRE(isAdmissible(map.spec, h, b1).admissible());
  REQUIRE(isAdmissible(map.spec, h, b2).admissible());
  for (const auto& c : admissibleBSpace(map.spec, h))
    CHECK(circDist(c.coeffs.dot(b1 - b2), 0.0) < 1e-9);
}

TEST_CASE("skew product construction and admissibility flags") {
  auto sp = testutil::threeExampleSkew();
  REQUIRE(sp.admissibility.has_value());
  CHECK(sp.admissibility->admissible());
  Eigen::VectorXd bad(3);
  bad << -1, 1, 1;
  CHECK_THROWS_AS(buildSkewProduct(testutil::threeExampleMap(), bad, bad), Error);
}

TEST_CASE("holonomy oracle matches the constraint and feels perturbations") {
  auto map = testutil::threeExampleMap();
  Eigen::VectorXd h(3), b(3);
  h << 2, 2, 2;
  b << 0.7, 0.4, 0.0;
  auto sp = buildSkewProduct(map, h, b);
  auto bt = flow::transportedOffsets(sp);
  auto sing = iet::sigmaPermutation(map.spec.mono);
  REQUIRE(sing.orbits.size() == 2);
  const auto& orbit = sing.orbits[1];  // the cycle {2}, away from zero

  CHECK(orbitConstraintHolonomyResidual(map.spec, h, bt, orbit) < 1e-10);

  // perturbing a coupled offset moves the residual by the perturbation
  Eigen::VectorXd bp = b;
  bp[1] += 0.1;
  auto spP = buildSkewProduct(map, h, bp);
  CHECK(orbitConstraintHolonomyResidual(map.spec, h, flow::transportedOffsets(spP),
                                        orbit) == doctest::Approx(0.1).epsilon(1e-6));
  bp = b;
  bp[2] += 0.1;
  auto spP2 = buildSkewProduct(map, h, bp);
  CHECK(orbitConstraintHolonomyResidual(map.spec, h, flow::transportedOffsets(spP2),
                                        orbit) == doctest::Approx(0.1).epsilon(1e-6));

  // an uncoupled offset leaves it untouched
  bp = b;
  bp[0] += 0.1;
  auto spP3 = buildSkewProduct(map, h, bp);
  CHECK(orbitConstraintHolonomyResidual(map.spec, h, flow::transportedOffsets(spP3),
                                        orbit) < 1e-10);
}

TEST_CASE("holonomy oracle agrees with the b-space description on samples") {
  auto map = testutil::threeExampleMap();
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto s = sampleAdmissible(map.spec, seed);
    auto sp = buildSkewProduct(map, s.h, s.b);
    auto bt = flow::transportedOffsets(sp);
    auto sing = iet::sigmaPermutation(map.spec.mono);
    for (int oi = 0; oi < static_cast<int>(sing.orbits.size()); ++oi) {
      if (oi == sing.zeroOrbit) continue;
      CHECK(orbitConstraintHolonomyResidual(map.spec, s.h, bt, sing.orbits[oi]) <
            1e-10);
    }
  }
}
