#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

#include "heisen/error.hpp"
#include "heisen/iet.hpp"
#include "heisen/linalg.hpp"
#include "heisen/lp.hpp"

namespace heisen::susp {

using iet::IetMap;
using iet::IetSpec;
using iet::Perm;
template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Membership in the suspension cone: all pi0-prefix sums of tau positive,
/// all pi1-prefix sums negative (proper prefixes only).
template <typename S>
bool coneContains(const Perm& mono, const VectorX<S>& tau) {
  const int d = static_cast<int>(mono.size());
  VectorX<S> byPi1(d);
  for (int i = 0; i < d; ++i) byPi1[mono[i] - 1] = tau[i];
  S top{0}, bottom{0};
  for (int k = 0; k < d - 1; ++k) {
    top += tau[k];
    bottom += byPi1[k];
    if (!(top > S{0}) || !(bottom < S{0})) return false;
  }
  return true;
}

/// Heights h = -Omega(tau); strictly positive whenever tau lies in the cone.
template <typename S>
VectorX<S> heightsFromTau(const Perm& mono, const VectorX<S>& tau) {
  if (!coneContains(mono, tau))
    throw Error(Err::TauNotInCone, "tau violates a cone inequality");
  VectorX<S> h = -iet::translationVector<S>(mono, tau);
  for (int i = 0; i < static_cast<int>(mono.size()); ++i)
    if (!(h[i] > S{0}))
      throw Error(Err::TauNotInCone, "degenerate suspension: nonpositive height");
  return h;
}

template <typename S>
struct HeightsMembership {
  bool contains = false;
  S slack{0};
  VectorX<S> witness;  // a tau in the open cone with -Omega(tau) = h
};

/// Decides h in H^+ = -Omega(cone) as a linear feasibility problem: solve
/// the linear system on the complement of the kernel, then search the
/// kernel coset against the 2(d-1) open inequalities. Exact over Rational;
/// over double the strict inequalities get a 1e-9 relative slack.
template <typename S>
HeightsMembership<S> heightsConeContains(const Perm& mono, const VectorX<S>& h) {
  const int d = static_cast<int>(mono.size());
  HeightsMembership<S> out;
  for (int i = 0; i < d; ++i)
    if (!(h[i] > S{0})) return out;  // heights must be positive

  Eigen::MatrixXi omega = iet::omegaMatrix(mono);
  linalg::MatrixX<S> a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = S(-omega(i, j));
  auto tau0 = linalg::solveConsistent<S>(a, h);
  if (!tau0) throw Error(Err::InconsistentSystem, "h is not in the image of Omega");
  if constexpr (!linalg::kExactField<S>) {
    S resid = (a * (*tau0) - h).template lpNorm<Eigen::Infinity>();
    S scl = h.template lpNorm<Eigen::Infinity>();
    if (resid > 1e-9 * std::max(S{1}, scl))
      throw Error(Err::InconsistentSystem, "h is not in the image of Omega");
  }

  // tau = tau0 + K c; inequalities become G c + g > 0.
  std::vector<Eigen::VectorXi> kernel = iet::kernelBasis(mono);
  const int k = static_cast<int>(kernel.size());
  const int m = 2 * (d - 1);
  linalg::MatrixX<S> g(m, k);
  VectorX<S> rhs(m);
  Perm pi1inv = iet::inversePerm(mono);
  {
    S top{0}, bottom{0};
    VectorX<S> ktop = VectorX<S>::Zero(k), kbot = VectorX<S>::Zero(k);
    for (int row = 0; row < d - 1; ++row) {
      top += (*tau0)[row];
      bottom += (*tau0)[pi1inv[row] - 1];
      for (int j = 0; j < k; ++j) {
        ktop[j] += S(kernel[j][row]);
        kbot[j] += S(kernel[j][pi1inv[row] - 1]);
      }
      for (int j = 0; j < k; ++j) {
        g(row, j) = ktop[j];
        g(d - 1 + row, j) = -kbot[j];
      }
      rhs[row] = top;
      rhs[d - 1 + row] = -bottom;
    }
  }

  S cap = std::max<S>(S{1}, h.template lpNorm<Eigen::Infinity>());
  auto fs = lp::maximinSlack<S>(g, rhs, cap);
  if (!fs.feasible) return out;
  S tol{0};
  if constexpr (!linalg::kExactField<S>) tol = 1e-9 * cap;
  if (!(fs.slack > tol)) return out;

  out.contains = true;
  out.slack = fs.slack;
  out.witness = *tau0;
  for (int j = 0; j < k; ++j) {
    VectorX<S> kv(d);
    for (int i = 0; i < d; ++i) kv[i] = S(kernel[j][i]);
    out.witness += fs.point[j] * kv;
  }
  return out;
}

// -- zippered-rectangle geometry (floating model) ---------------------------

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool containsClosed(double x, double y, double tol = 1e-12) const {
    return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
  }
};

struct VSegment {
  double x = 0, y0 = 0, y1 = 0;  // y0 <= y1
  double length() const { return y1 - y0; }
};

struct Gluing {
  int symbol = 0;   // pi0 index
  double dx = 0, dy = 0;  // translation R^0 -> R^1
};

/// The zippered-rectangle model of the suspension: a rectangle pair per
/// symbol above and below the cross-section I x {0}, the zipper segments
/// at the column junctions, and the extra segment closing the surface on
/// the side determined by the sign of sum(tau).
struct Suspension {
  IetMap<double> base;
  Eigen::VectorXd tau;
  Eigen::VectorXd heights;
  std::vector<Rect> top, bottom;       // pi0- and pi1-ordered columns, per symbol
  std::vector<VSegment> slitTop;       // junction k (1..d-1), upward
  std::vector<VSegment> slitBottom;    // junction k (1..d-1), downward
  VSegment outer;                      // at x = |I|, side given by sum(tau)
  std::optional<VSegment> stilde;      // degenerate (absent) when sum(tau) = 0
  int stildeJunction = 0;              // 1-based junction index of stilde
  std::vector<Gluing> gluings;
  iet::SingularityData singularities;
  double area = 0;
};

inline double surfaceArea(const Suspension& s) { return s.area; }

template <typename S>
double toDoubleValue(const S& v) {
  if constexpr (std::is_same_v<S, double>) return v;
  else return v.toDouble();
}

template <typename S>
Suspension buildZipperedRectangles(const IetSpec<S>& spec, const VectorX<S>& tau) {
  const int d = spec.size();
  VectorX<S> h = heightsFromTau<S>(spec.mono, tau);  // validates the cone

  Suspension out;
  IetSpec<double> dspec;
  dspec.symbols = spec.symbols;
  dspec.mono = spec.mono;
  dspec.lengths.resize(d);
  out.tau.resize(d);
  out.heights.resize(d);
  for (int i = 0; i < d; ++i) {
    dspec.lengths[i] = toDoubleValue(spec.lengths[i]);
    out.tau[i] = toDoubleValue(tau[i]);
    out.heights[i] = toDoubleValue(h[i]);
  }
  out.base = IetMap<double>::fromSpec(std::move(dspec));
  out.singularities = iet::sigmaPermutation(spec.mono);

  const Perm& p = spec.mono;
  const Perm pi1inv = iet::inversePerm(p);

  // Column partial sums in both orders.
  std::vector<double> xTop(d + 1, 0.0), xBot(d + 1, 0.0);
  std::vector<double> tTop(d + 1, 0.0), tBot(d + 1, 0.0);
  for (int kpos = 1; kpos <= d; ++kpos) {
    const int i0 = kpos - 1;            // symbol at pi0-position kpos
    const int i1 = pi1inv[kpos - 1] - 1; // symbol at pi1-position kpos
    xTop[kpos] = xTop[kpos - 1] + out.base.spec.lengths[i0];
    tTop[kpos] = tTop[kpos - 1] + out.tau[i0];
    xBot[kpos] = xBot[kpos - 1] + out.base.spec.lengths[i1];
    tBot[kpos] = tBot[kpos - 1] + out.tau[i1];
  }

  out.top.resize(d);
  out.bottom.resize(d);
  for (int i = 0; i < d; ++i) {
    const int k0 = i + 1;         // pi0-position of symbol i
    const int k1 = p[i];          // pi1-position of symbol i
    out.top[i] = Rect{xTop[k0 - 1], xTop[k0], 0.0, out.heights[i]};
    out.bottom[i] = Rect{xBot[k1 - 1], xBot[k1], -out.heights[i], 0.0};
    out.gluings.push_back(Gluing{i, xBot[k1 - 1] - xTop[k0 - 1], -out.heights[i]});
  }

  for (int k = 1; k <= d - 1; ++k) {
    out.slitTop.push_back(VSegment{xTop[k], 0.0, tTop[k]});
    out.slitBottom.push_back(VSegment{xBot[k], tBot[k], 0.0});
  }

  const double total = xTop[d];
  const double sumTau = tTop[d];
  out.outer = VSegment{total, std::min(0.0, sumTau), std::max(0.0, sumTau)};
  if (sumTau > 0) {
    const int a1 = pi1inv[d - 1] - 1;  // symbol with pi1 = d
    const int k = a1 + 1;              // its pi0-position = junction index
    out.stildeJunction = k;
    out.stilde = VSegment{xTop[k], out.heights[a1], tTop[k]};
  } else if (sumTau < 0) {
    const int a0 = d - 1;              // symbol with pi0 = d
    const int k = p[a0];               // its pi1-position
    out.stildeJunction = k;
    out.stilde = VSegment{xBot[k], tBot[k], -out.heights[a0]};
  }

  double area = 0;
  for (int i = 0; i < d; ++i) area += out.base.spec.lengths[i] * out.heights[i];
  out.area = area;
  return out;
}

/// Structural closure audit of the model. Verifies, within tol:
///  - bottom edges of top rectangles and top edges of bottom rectangles
///    tile the cross-section I x {0} (both orders partition [0,|I|]);
///  - each R^0 maps exactly onto its R^1 under the recorded translation,
///    so every rectangle edge is matched by that gluing;
///  - each junction slit fits under the adjacent rectangles, except for the
///    single designated junction where it protrudes by exactly |sum(tau)|
///    and is closed up by the extra segment against the outer segment;
///  - the extra segment and the outer segment are translates of equal length.
inline void boundaryAudit(const Suspension& s, double tol = 1e-9) {
  const int d = s.base.size();
  const double total = s.base.total();
  auto fail = [&](const std::string& msg) {
    throw Error(Err::ValidationError, "boundary audit: " + msg);
  };

  // Section tiling, both banks.
  double acc = 0;
  for (int k = 0; k < d; ++k) {
    if (std::abs(s.top[k].x0 - acc) > tol) fail("top columns do not tile I");
    acc = s.top[k].x1;
  }
  if (std::abs(acc - total) > tol) fail("top columns do not close at |I|");
  Perm pi1inv = iet::inversePerm(s.base.spec.mono);
  acc = 0;
  for (int k = 1; k <= d; ++k) {
    const Rect& r = s.bottom[pi1inv[k - 1] - 1];
    if (std::abs(r.x0 - acc) > tol) fail("bottom columns do not tile I");
    acc = r.x1;
  }
  if (std::abs(acc - total) > tol) fail("bottom columns do not close at |I|");

  // Rectangle pair identification carries every R^0 edge onto an R^1 edge.
  for (int i = 0; i < d; ++i) {
    const Rect& a = s.top[i];
    const Rect& b = s.bottom[i];
    const Gluing& g = s.gluings[i];
    if (std::abs(g.dx - s.base.w[i]) > tol) fail("gluing differs from w");
    if (std::abs(a.x0 + g.dx - b.x0) > tol || std::abs(a.x1 + g.dx - b.x1) > tol ||
        std::abs(a.y0 + g.dy - b.y0) > tol || std::abs(a.y1 + g.dy - b.y1) > tol)
      fail("R^0 does not translate onto R^1");
  }

  const double sumTau = s.tau.sum();
  for (int k = 1; k <= d - 1; ++k) {
    const VSegment& sl = s.slitTop[k - 1];
    if (!(sl.length() > tol)) fail("top slit collapsed");
    const double hl = s.top[k - 1].height();
    const double hr = s.top[k].height();
    if (sl.y1 > hr + tol) fail("top slit taller than right column");
    const bool protrudes = sumTau > tol && s.stilde && s.stildeJunction == k &&
                           s.stilde->x == sl.x;
    if (!protrudes) {
      if (sl.y1 > hl + tol) fail("top slit taller than left column");
    } else {
      if (std::abs((sl.y1 - hl) - sumTau) > tol)
        fail("top protrusion is not sum(tau)");
      if (std::abs(s.stilde->y0 - hl) > tol || std::abs(s.stilde->y1 - sl.y1) > tol)
        fail("extra segment does not sit on the protrusion");
    }
  }
  for (int k = 1; k <= d - 1; ++k) {
    const VSegment& sl = s.slitBottom[k - 1];
    if (!(sl.length() > tol)) fail("bottom slit collapsed");
    const double hl = s.bottom[pi1inv[k - 1] - 1].height();
    const double hr = s.bottom[pi1inv[k] - 1].height();
    if (-sl.y0 > hr + tol) fail("bottom slit deeper than right column");
    const bool protrudes = sumTau < -tol && s.stilde && s.stildeJunction == k &&
                           s.stilde->x == sl.x;
    if (!protrudes) {
      if (-sl.y0 > hl + tol) fail("bottom slit deeper than left column");
    } else {
      if (std::abs((-sl.y0 - hl) - (-sumTau)) > tol)
        fail("bottom protrusion is not |sum(tau)|");
    }
  }

  // Extra segment closes against the outer segment by translation.
  if (std::abs(s.outer.length() - std::abs(sumTau)) > tol)
    fail("outer segment length is not |sum(tau)|");
  if (std::abs(sumTau) > tol) {
    if (!s.stilde) fail("missing extra segment");
    if (std::abs(s.stilde->length() - s.outer.length()) > tol)
      fail("extra segment length differs from outer segment");
  } else if (s.stilde) {
    fail("degenerate case must have no extra segment");
  }
}

}  // namespace heisen::susp
