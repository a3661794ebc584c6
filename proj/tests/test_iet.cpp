#include <doctest.h>

#include "heisen/iet.hpp"
#include "heisen/linalg.hpp"
#include "helpers.hpp"

using namespace heisen;
using namespace heisen::iet;
using testutil::rotationRaw;

TEST_CASE("validate accepts the rotation case") {
  auto spec = validateIet<double>(rotationRaw("0.4", "0.6"));
  CHECK(spec.size() == 2);
  CHECK(spec.mono == Perm{2, 1});
  CHECK(spec.lengths[0] == doctest::Approx(0.4));
}

TEST_CASE("validate rejects the identity pair as reducible") {
  RawIet raw{{"A", "B"}, {1, 2}, {1, 2}, {"0.5", "0.5"}};
  CHECK_THROWS_AS(validateIet<double>(raw), Error);
  try {
    validateIet<double>(raw);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::ReduciblePermutation);
  }
}

TEST_CASE("validate accepts the irreducible three-letter example") {
  RawIet raw{{"A", "B", "C"}, {1, 2, 3}, {3, 1, 2}, {"0.4", "0.3", "0.3"}};
  auto spec = validateIet<double>(raw);
  CHECK(spec.mono == Perm{3, 1, 2});
}

TEST_CASE("validate rejects bad input") {
  CHECK_THROWS_AS(validateIet<double>(
                      RawIet{{"A", "B"}, {1, 2}, {2, 1}, {"0.4", "-0.6"}}),
                  Error);
  CHECK_THROWS_AS(validateIet<double>(
                      RawIet{{"A", "B"}, {1, 1}, {2, 1}, {"0.4", "0.6"}}),
                  Error);
  CHECK_THROWS_AS(validateIet<double>(
                      RawIet{{"A", "B"}, {1, 2}, {2, 1}, {"0.4", "zebra"}}),
                  Error);
}

TEST_CASE("validate canonicalizes to pi0 order") {
  // Same exchange presented with shuffled alphabet: pi0 sends B first.
  RawIet raw{{"B", "A"}, {1, 2}, {2, 1}, {"0.6", "0.4"}};
  auto spec = validateIet<double>(raw);
  CHECK(spec.symbols == std::vector<std::string>{"B", "A"});
  CHECK(spec.lengths[0] == doctest::Approx(0.6));
}

TEST_CASE("omega matrix on the reference pairs") {
  Eigen::MatrixXi w2 = omegaMatrix({2, 1});
  CHECK(w2(0, 0) == 0);
  CHECK(w2(0, 1) == 1);
  CHECK(w2(1, 0) == -1);

  Eigen::MatrixXi w1 = omegaMatrix({1});
  CHECK(w1(0, 0) == 0);

  Eigen::MatrixXi w3 = omegaMatrix({3, 1, 2});
  Eigen::MatrixXi expect(3, 3);
  expect << 0, 1, 1, -1, 0, 0, -1, 0, 0;
  CHECK(w3 == expect);
}

TEST_CASE("omega is antisymmetric for every pair with d <= 6") {
  for (int d = 1; d <= 6; ++d)
    for (const Perm& p : testutil::irreducibleMonodromies(d)) {
      Eigen::MatrixXi w = omegaMatrix(p);
      CHECK((w + w.transpose()).cwiseAbs().maxCoeff() == 0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) CHECK(std::abs(w(i, j)) <= 1);
    }
}

TEST_CASE("translation vector") {
  Eigen::VectorXd lam(2);
  lam << 0.4, 0.6;
  Eigen::VectorXd w = translationVector<double>({2, 1}, lam);
  CHECK(w[0] == doctest::Approx(0.6));
  CHECK(w[1] == doctest::Approx(-0.4));

  Eigen::VectorXd lam3(3);
  lam3 << 0.4, 0.3, 0.3;
  Eigen::VectorXd w3 = translationVector<double>({3, 1, 2}, lam3);
  CHECK(w3[0] == doctest::Approx(0.6));
  CHECK(w3[1] == doctest::Approx(-0.4));
  CHECK(w3[2] == doctest::Approx(-0.4));

  // identity pair: zero pairing, zero displacement
  Eigen::VectorXd wid = translationVector<double>({1, 2, 3}, lam3);
  CHECK(wid.cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("monodromy composes the pair") {
  CHECK(monodromy({1, 2}, {2, 1}) == Perm{2, 1});
  CHECK(monodromy({1, 2, 3, 4}, {4, 3, 2, 1}) == Perm{4, 3, 2, 1});
  CHECK(monodromy({2, 1, 3}, {2, 1, 3}) == Perm{1, 2, 3});
}

TEST_CASE("sigma permutation and orbits") {
  SUBCASE("two-letter swap: one cycle through zero") {
    auto s = sigmaPermutation({2, 1});
    CHECK(s.sigma == std::vector<int>{1, 2, 0});
    REQUIRE(s.orbits.size() == 1);
    CHECK(s.orbits[0] == std::vector<int>{0, 1, 2});
    CHECK(s.zeroOrbit == 0);
  }
  SUBCASE("reversing four-letter: single cycle") {
    auto s = sigmaPermutation({4, 3, 2, 1});
    CHECK(s.sigma == std::vector<int>{3, 4, 0, 1, 2});
    CHECK(s.orbits.size() == 1);
  }
  SUBCASE("three-letter (3,1,2): cycles {0,1,3} and {2}") {
    auto s = sigmaPermutation({3, 1, 2});
    REQUIRE(s.orbits.size() == 2);
    CHECK(s.orbits[0] == std::vector<int>{0, 1, 3});
    CHECK(s.orbits[1] == std::vector<int>{2});
    CHECK(s.zeroOrbit == 0);
  }
}

TEST_CASE("kernel basis on the reference pairs") {
  CHECK(kernelBasis({2, 1}).empty());
  CHECK(kernelBasis({4, 3, 2, 1}).empty());
  auto basis = kernelBasis({3, 1, 2});
  REQUIRE(basis.size() == 1);
  CHECK(basis[0](0) == 0);
  CHECK(basis[0](1) == 1);
  CHECK(basis[0](2) == -1);
  Eigen::MatrixXi w = omegaMatrix({3, 1, 2});
  CHECK((w * basis[0]).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("kernel basis matches a rational elimination oracle, d <= 5") {
  using heisen::Rational;
  for (int d = 2; d <= 5; ++d) {
    for (const Perm& p : testutil::irreducibleMonodromies(d)) {
      Eigen::MatrixXi w = omegaMatrix(p);
      auto basis = kernelBasis(p);
      for (const auto& v : basis)
        CHECK((w * v).cwiseAbs().maxCoeff() == 0);

      linalg::MatrixX<Rational> wr(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) wr(i, j) = Rational(w(i, j));
      auto oracle = linalg::nullspace<Rational>(wr);
      CHECK(oracle.size() == basis.size());
      CHECK(static_cast<int>(basis.size()) ==
            static_cast<int>(sigmaPermutation(p).orbits.size()) - 1);

      // the formula vectors must be independent: rank of the stacked matrix
      if (!basis.empty()) {
        linalg::MatrixX<Rational> stack(d, static_cast<int>(basis.size()));
        for (int j = 0; j < static_cast<int>(basis.size()); ++j)
          for (int i = 0; i < d; ++i) stack(i, j) = Rational(basis[j](i));
        CHECK(linalg::rank<Rational>(stack) == static_cast<int>(basis.size()));
      }
    }
  }
}

TEST_CASE("apply moves points by the interval translation") {
  auto map = testutil::rotationMap(0.4, 0.6);
  CHECK(ietApply(map, 0.1).value == doctest::Approx(0.7));
  CHECK(ietApply(map, 0.5).value == doctest::Approx(0.1));
  CHECK(ietApply(map, 0.0).value == doctest::Approx(0.6));  // leftmost interval
  CHECK_THROWS_AS(ietApply(map, 1.0), Error);
  CHECK_THROWS_AS(ietApply(map, -0.1), Error);
}

TEST_CASE("apply flags near-discontinuity points") {
  auto map = testutil::rotationMap(0.4, 0.6);
  CHECK(ietApply(map, 0.4 + 1e-13).nearDiscontinuity);
  CHECK_FALSE(ietApply(map, 0.2).nearDiscontinuity);
}

TEST_CASE("measure preservation: images tile the interval") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    auto monos = testutil::irreducibleMonodromies(d);
    IetSpec<double> spec;
    spec.mono = monos[rng() % monos.size()];
    spec.symbols.resize(d, "x");
    spec.lengths.resize(d);
    double tot = 0;
    for (int i = 0; i < d; ++i) {
      spec.lengths[i] = 0.1 + uniform01(rng);
      tot += spec.lengths[i];
    }
    auto map = IetMap<double>::fromSpec(std::move(spec));
    std::vector<std::pair<double, double>> images;
    for (int i = 0; i < d; ++i)
      images.emplace_back(map.breakpoints[i] + map.w[i],
                          map.breakpoints[i] + map.spec.lengths[i] + map.w[i]);
    std::sort(images.begin(), images.end());
    CHECK(std::abs(images.front().first) < 1e-12);
    for (std::size_t i = 0; i + 1 < images.size(); ++i)
      CHECK(std::abs(images[i].second - images[i + 1].first) < 1e-12);
    CHECK(std::abs(images.back().second - tot) < 1e-12);
  }
}

TEST_CASE("orbits: exact rational path is the oracle for the floating path") {
  using heisen::Rational;
  auto dspec = validateIet<double>(rotationRaw("2/5", "3/5"));
  auto rspec = validateIet<Rational>(rotationRaw("2/5", "3/5"));
  auto dmap = IetMap<double>::fromSpec(std::move(dspec));
  auto rmap = IetMap<Rational>::fromSpec(std::move(rspec));

  // rational lengths with rational start: exact periodicity
  auto orb = ietOrbit<Rational>(rmap, Rational(1, 4), 10);
  CHECK(orb.points[1] == Rational(1, 4) + Rational(3, 5) + Rational(3, 5) - Rational(1));

  auto dorb = ietOrbit<double>(dmap, 0.25, 10000);
  auto rorb = ietOrbit<Rational>(rmap, Rational(1, 4), 10000);
  for (std::size_t k = 0; k < dorb.points.size(); k += 97)
    CHECK(std::abs(dorb.points[k] - rorb.points[k].toDouble()) < 1e-10);
}

TEST_CASE("half-half rational exchange has a period-two orbit") {
  using heisen::Rational;
  auto spec = validateIet<Rational>(rotationRaw("1/2", "1/2"));
  auto map = IetMap<Rational>::fromSpec(std::move(spec));
  auto orb = ietOrbit<Rational>(map, Rational(1, 4), 4);
  CHECK(orb.points[0] == Rational(3, 4));
  CHECK(orb.points[1] == Rational(1, 4));
  CHECK(orb.points[3] == Rational(1, 4));
}

TEST_CASE("golden orbit stays in the interval and is reliable") {
  auto map = testutil::goldenMap();
  auto orb = ietOrbit<double>(map, 0.123456789, 100000);
  CHECK(orb.reliable);
  for (std::size_t k = 0; k < orb.points.size(); k += 1013) {
    CHECK(orb.points[k] >= 0.0);
    CHECK(orb.points[k] < 1.0);
  }
  CHECK(orb.points[0] == doctest::Approx(0.123456789 + testutil::kGoldenAlpha));
}

TEST_CASE("orbit of length one is a single application") {
  auto map = testutil::threeExampleMap();
  auto orb = ietOrbit<double>(map, 0.1, 1);
  REQUIRE(orb.points.size() == 1);
  CHECK(orb.points[0] == doctest::Approx(ietApply(map, 0.1).value));
}

TEST_CASE("inverse map undoes the exchange for random pairs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    auto monos = testutil::irreducibleMonodromies(d);
    IetSpec<double> spec;
    spec.mono = monos[rng() % monos.size()];
    spec.symbols.assign(d, "x");
    spec.lengths.resize(d);
    for (int i = 0; i < d; ++i) spec.lengths[i] = 0.05 + uniform01(rng);
    auto map = IetMap<double>::fromSpec(std::move(spec));
    auto inv = inverseMap(map);
    CHECK(inv.spec.mono == inversePerm(map.spec.mono));
    for (int k = 0; k < 20; ++k) {
      const double x = uniform01(rng) * map.total();
      CHECK(ietApply(inv, ietApply(map, x).value).value ==
            doctest::Approx(x).epsilon(1e-12));
      CHECK(ietApply(map, ietApply(inv, x).value).value ==
            doctest::Approx(x).epsilon(1e-12));
    }
  }
}
