#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "heisen/bundle.hpp"
#include "heisen/iet.hpp"

namespace testutil {

using heisen::iet::IetMap;
using heisen::iet::IetSpec;
using heisen::iet::Perm;
using heisen::iet::RawIet;

inline constexpr double kGoldenAlpha = 0.61803398874989484820;

/// Two-interval exchange (swap) with lengths (a, 1-a): rotation by 1-a.
inline RawIet rotationRaw(const std::string& la, const std::string& lb) {
  return RawIet{{"A", "B"}, {1, 2}, {2, 1}, {la, lb}};
}

inline IetMap<double> rotationMap(double lambdaA, double lambdaB) {
  IetSpec<double> spec;
  spec.symbols = {"A", "B"};
  spec.mono = {2, 1};
  spec.lengths.resize(2);
  spec.lengths << lambdaA, lambdaB;
  return IetMap<double>::fromSpec(std::move(spec));
}

/// Rotation by the golden number: lambda = (1 - alpha, alpha).
inline IetMap<double> goldenMap() {
  return rotationMap(1.0 - kGoldenAlpha, kGoldenAlpha);
}

inline heisen::bundle::SkewProduct goldenSkew() {
  Eigen::VectorXd h(2), b(2);
  h << 1, 1;
  b << 0, 0;
  return heisen::bundle::buildSkewProduct(goldenMap(), h, b);
}

/// Three-interval example with monodromy (3,1,2): a torus with two marked
/// points; lambda = (0.4, 0.3, 0.3), tau = (2,-1,-1), h = (2,2,2).
inline IetMap<double> threeExampleMap() {
  IetSpec<double> spec;
  spec.symbols = {"A", "B", "C"};
  spec.mono = {3, 1, 2};
  spec.lengths.resize(3);
  spec.lengths << 0.4, 0.3, 0.3;
  return IetMap<double>::fromSpec(std::move(spec));
}

inline Eigen::VectorXd threeExampleTau() {
  Eigen::VectorXd tau(3);
  tau << 2, -1, -1;
  return tau;
}

inline heisen::bundle::SkewProduct threeExampleSkew() {
  Eigen::VectorXd h(3), b(3);
  h << 2, 2, 2;
  b << 0.7, 0.4, 0.0;
  return heisen::bundle::buildSkewProduct(threeExampleMap(), h, b);
}

/// Four-interval reversing exchange, a genus-two surface.
inline IetMap<double> reversing4Map() {
  IetSpec<double> spec;
  spec.symbols = {"A", "B", "C", "D"};
  spec.mono = {4, 3, 2, 1};
  spec.lengths.resize(4);
  spec.lengths << 0.2, 0.3, 0.1, 0.4;
  return IetMap<double>::fromSpec(std::move(spec));
}

inline std::vector<Perm> allPermutations(int d) {
  Perm p(d);
  std::iota(p.begin(), p.end(), 1);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<Perm> irreducibleMonodromies(int d) {
  std::vector<Perm> out;
  for (const Perm& p : allPermutations(d))
    if (heisen::iet::isIrreducible(p)) out.push_back(p);
  return out;
}

/// Closed-form modulus of the lag-n mode-1 correlation of the golden-torus
/// skew product with unit slopes and zero offsets. Derived independently:
/// the integer parts of the orbit sum telescope out of the phase, leaving a
/// two-piece linear-phase integral that evaluates to
///   |C(n)| = 2 sin(pi a) |sin(pi n frac(n a))| / (pi n),  a = alpha.
inline double goldenModeOneAbs(std::int64_t n) {
  if (n == 0) return 1.0;
  const double a = kGoldenAlpha;
  const double beta = std::fmod(static_cast<double>(n) * a, 1.0);
  return 2.0 * std::sin(M_PI * a) *
         std::abs(std::sin(M_PI * static_cast<double>(n) * beta)) /
         (M_PI * static_cast<double>(n));
}

}  // namespace testutil
