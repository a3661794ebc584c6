#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "heisen/error.hpp"
#include "heisen/iet.hpp"
#include "heisen/numeric.hpp"
#include "heisen/suspension.hpp"

namespace heisen::bundle {

using iet::IetMap;
using iet::IetSpec;

inline constexpr double kModTol = 1e-9;

/// Integrality of the total area in normalized units (fiber R/Z, a
/// disk-bounding loop twists the fiber by the enclosed area mod 1).
inline bool weilCheck(const Eigen::VectorXd& lambda, const Eigen::VectorXd& h,
                      double tol = kModTol) {
  const double area = lambda.dot(h);
  return std::abs(area - std::round(area)) <= tol;
}

/// Fiber twist of the boundary of an axis-aligned width x height rectangle.
inline double rectHolonomy(double width, double height) {
  return wrap01(width * height);
}

/// One linear constraint mod 1 on the offsets b, attached to a sigma-cycle.
struct OrbitConstraint {
  int orbitIndex = 0;           // index into SingularityData::orbits
  Eigen::VectorXd coeffs;       // +-1/0 pattern over symbols, pi0 order
  double rhs = 0;               // in [0, 1)
};

/// The affine subspace of admissible offsets: one constraint per sigma-cycle
/// away from zero. The coefficient pattern of a cycle equals its kernel-basis
/// step vector, so the constraints are linearly independent and the
/// codimension is (#cycles - 1).
inline std::vector<OrbitConstraint> admissibleBSpace(const IetSpec<double>& spec,
                                                     const Eigen::VectorXd& h) {
  if (!weilCheck(spec.lengths, h))
    throw Error(Err::NotWeilIntegral, "area = lambda . h is not an integer");
  {
    susp::VectorX<double> hh = h;
    if (!susp::heightsConeContains<double>(spec.mono, hh).contains)
      throw Error(Err::HeightsNotInCone, "h is not realized by any suspension");
  }
  const int d = spec.size();
  const iet::SingularityData sing = iet::sigmaPermutation(spec.mono);
  std::vector<OrbitConstraint> out;
  for (int oi = 0; oi < static_cast<int>(sing.orbits.size()); ++oi) {
    if (oi == sing.zeroOrbit) continue;
    std::vector<bool> inOrbit(d + 2, false);
    for (int k : sing.orbits[oi]) inOrbit[k] = true;
    OrbitConstraint c;
    c.orbitIndex = oi;
    c.coeffs = Eigen::VectorXd::Zero(d);
    double sum = 0;
    for (int k = 1; k <= d; ++k) {
      c.coeffs[k - 1] =
          static_cast<double>(inOrbit[k]) - static_cast<double>(inOrbit[k - 1]);
      if (inOrbit[k]) sum += spec.lengths[k - 1] * h[k - 1];
    }
    c.rhs = wrap01(-sum);
    out.push_back(std::move(c));
  }
  return out;
}

struct AdmissibilityReport {
  bool heightsInCone = false;
  bool weilIntegral = false;
  std::vector<double> constraintResiduals;  // circular distance per cycle
  double tolerance = kModTol;

  bool constraintsHold() const {
    for (double r : constraintResiduals)
      if (r > tolerance) return false;
    return true;
  }
  bool admissible() const {
    return heightsInCone && weilIntegral && constraintsHold();
  }
};

/// Report-style conjunction of the three admissibility conditions.
inline AdmissibilityReport isAdmissible(const IetSpec<double>& spec,
                                        const Eigen::VectorXd& h,
                                        const Eigen::VectorXd& b) {
  AdmissibilityReport rep;
  rep.weilIntegral = weilCheck(spec.lengths, h);
  bool positive = true;
  for (int i = 0; i < spec.size(); ++i) positive = positive && h[i] > 0;
  if (positive) {
    susp::VectorX<double> hh = h;
    rep.heightsInCone = susp::heightsConeContains<double>(spec.mono, hh).contains;
  }
  const iet::SingularityData sing = iet::sigmaPermutation(spec.mono);
  const int d = spec.size();
  for (int oi = 0; oi < static_cast<int>(sing.orbits.size()); ++oi) {
    if (oi == sing.zeroOrbit) continue;
    std::vector<bool> inOrbit(d + 2, false);
    for (int k : sing.orbits[oi]) inOrbit[k] = true;
    double lhs = 0, rhs = 0;
    for (int k = 1; k <= d; ++k) {
      double coef =
          static_cast<double>(inOrbit[k]) - static_cast<double>(inOrbit[k - 1]);
      lhs += coef * b[k - 1];
      if (inOrbit[k]) rhs -= spec.lengths[k - 1] * h[k - 1];
    }
    rep.constraintResiduals.push_back(circDist(lhs, rhs));
  }
  return rep;
}

/// The cross-section first-return map: x -> T(x) on the base and an affine
/// fiber shift rho -> rho + h_a (x - dI_a) + b_a above the a-th interval.
struct SkewProduct {
  IetMap<double> base;
  Eigen::VectorXd slopes;   // h, positive
  Eigen::VectorXd offsets;  // b, reduced to [0, 1)
  std::optional<AdmissibilityReport> admissibility;

  int size() const { return base.size(); }

  /// Skewing function g(x) = h_a (x - dI_a) + b_a (not reduced mod 1).
  double skewing(double x, int sym) const {
    return slopes[sym] * (x - base.breakpoints[sym]) + offsets[sym];
  }
};

inline SkewProduct buildSkewProduct(const IetMap<double>& base,
                                    const Eigen::VectorXd& h,
                                    const Eigen::VectorXd& b) {
  const int d = base.size();
  for (int i = 0; i < d; ++i)
    if (!(h[i] > 0))
      throw Error(Err::ValidationError, "skew slopes must be positive");
  SkewProduct s;
  s.base = base;
  s.slopes = h;
  s.offsets.resize(d);
  for (int i = 0; i < d; ++i) s.offsets[i] = wrap01(b[i]);
  s.admissibility = isAdmissible(base.spec, h, s.offsets);
  return s;
}

struct AdmissibleSample {
  Eigen::VectorXd tau, h, b;
};

/// Deterministic-in-seed sample from the admissible parameter space:
/// tau from the suspension cone rescaled to integer area, b from the
/// affine solution set of the orbit constraints.
inline AdmissibleSample sampleAdmissible(const IetSpec<double>& spec,
                                         std::uint64_t seed) {
  const int d = spec.size();
  std::mt19937_64 rng(seed);
  susp::VectorX<double> tau(d);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (int i = 0; i < d; ++i) {
      const double canonical = spec.mono[i] - (i + 1);  // always in the cone
      tau[i] = canonical + 0.45 * uniformIn(rng, -1.0, 1.0);
    }
    if (susp::coneContains<double>(spec.mono, tau)) break;
    if (attempt == 999)
      throw Error(Err::NumericalGuard, "cone sampling failed");
  }
  Eigen::VectorXd h = susp::heightsFromTau<double>(spec.mono, tau);
  const double area0 = spec.lengths.dot(h);
  const double target = std::max(1.0, std::round(area0));
  tau *= target / area0;
  h *= target / area0;

  Eigen::VectorXd b(d);
  for (int i = 0; i < d; ++i) b[i] = uniform01(rng);
  const auto constraints = admissibleBSpace(spec, h);
  const int m = static_cast<int>(constraints.size());
  if (m > 0) {
    Eigen::MatrixXd c(m, d);
    Eigen::VectorXd delta(m);
    for (int i = 0; i < m; ++i) {
      c.row(i) = constraints[i].coeffs.transpose();
      delta[i] = wrapHalf(constraints[i].rhs - constraints[i].coeffs.dot(b));
    }
    Eigen::MatrixXd gram = c * c.transpose();
    b += c.transpose() * gram.ldlt().solve(delta);
  }
  for (int i = 0; i < d; ++i) b[i] = wrap01(b[i]);
  return AdmissibleSample{Eigen::VectorXd(tau), std::move(h), std::move(b)};
}

/// Recomputes one orbit constraint from holonomies: the left-hand side from
/// transported offsets (as produced by the flow's first return at the left
/// edges), the right-hand side from rectangle-boundary twists, all mod 1.
/// Residual is the circular distance between the two sides.
inline double orbitConstraintHolonomyResidual(const IetSpec<double>& spec,
                                              const Eigen::VectorXd& h,
                                              const Eigen::VectorXd& bTransported,
                                              const std::vector<int>& orbit) {
  const int d = spec.size();
  std::vector<bool> inOrbit(d + 2, false);
  for (int k : orbit) inOrbit[k] = true;
  double lhs = 0;
  double rhs = 0;
  for (int k = 1; k <= d; ++k) {
    if (inOrbit[k]) lhs += bTransported[k - 1];
    if (inOrbit[k - 1]) lhs -= bTransported[k - 1];
    if (inOrbit[k]) rhs += rectHolonomy(spec.lengths[k - 1], h[k - 1]);
  }
  return circDist(wrap01(lhs), wrap01(-rhs));
}

}  // namespace heisen::bundle
