#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heisen/bundle.hpp"
#include "heisen/numeric.hpp"

namespace heisen::skew {

using bundle::SkewProduct;

struct SkewPoint {
  double x = 0;
  double rho = 0;
};

struct SkewStep {
  SkewPoint point;
  int symbol = 0;
  bool nearDiscontinuity = false;
};

/// One application of the cross-section return map.
inline SkewStep skewApply(const SkewProduct& s, const SkewPoint& p) {
  auto base = iet::ietApply(s.base, p.x);
  SkewStep out;
  out.symbol = base.symbol;
  out.nearDiscontinuity = base.nearDiscontinuity;
  out.point.x = base.value;
  out.point.rho = wrap01(p.rho + s.skewing(p.x, base.symbol));
  return out;
}

struct SkewOrbit {
  std::vector<SkewPoint> points;  // start, T start, ..., T^{N-1} start
  bool reliable = true;
};

/// Orbit of length N including the start point. On two-interval bases the
/// horizontal coordinate uses the closed-form rotation iterate, so long
/// orbits do not accumulate base error.
inline SkewOrbit skewOrbit(const SkewProduct& s, const SkewPoint& start,
                           std::int64_t n) {
  if (n < 1) throw Error(Err::ValidationError, "orbit length must be >= 1");
  SkewOrbit out;
  out.points.reserve(static_cast<std::size_t>(n));
  if (s.size() == 2) {
    const double total = s.base.total();
    double rho = start.rho;
    double x = start.x;
    for (std::int64_t k = 0; k < n; ++k) {
      if (iet::nearBreakpoint(s.base, x)) out.reliable = false;
      out.points.push_back(SkewPoint{x, rho});
      rho = wrap01(rho + s.skewing(x, s.base.symbolAt(x)));
      x = iet::detail::wrapMod(start.x + static_cast<double>(k + 1) * s.base.w[0],
                               total);
    }
    return out;
  }
  SkewPoint p = start;
  for (std::int64_t k = 0; k < n; ++k) {
    out.points.push_back(p);
    SkewStep step = skewApply(s, p);
    if (step.nearDiscontinuity) out.reliable = false;
    p = step.point;
  }
  return out;
}

struct SkewingSum {
  double value = 0;  // G_n(x) mod 1
  bool reliable = true;
};

/// Birkhoff sum of the skewing function: G_0 = 0,
/// G_{n+1}(x) = G_n(x) + g(T^n x). The n-fold return map is
/// (x, rho) -> (T^n x, rho + G_n(x)).
inline SkewingSum birkhoffSkewingSum(const SkewProduct& s, double x,
                                     std::int64_t n) {
  if (n < 0) throw Error(Err::ValidationError, "negative skewing horizon");
  SkewingSum out;
  double acc = 0;
  double cur = x;
  for (std::int64_t k = 0; k < n; ++k) {
    auto step = iet::ietApply(s.base, cur);
    if (step.nearDiscontinuity) out.reliable = false;
    acc += s.skewing(cur, step.symbol);
    cur = step.value;
  }
  out.value = wrap01(acc);
  return out;
}

/// Observable in a single fiber Fourier mode: f(x, rho) = F(x) e^{2 pi i n rho}.
struct ModeObservable {
  int mode = 0;
  std::function<Complex(double)> baseFn;
  std::vector<double> discontinuities;  // of the base function, inside (0,|I|)
  std::string description;

  Complex operator()(double x, double rho) const {
    return baseFn(x) * unitPhase(mode * rho);
  }
  static ModeObservable constant(int mode, Complex value = Complex(1, 0)) {
    return ModeObservable{mode, [value](double) { return value; }, {},
                          "constant"};
  }
  static ModeObservable indicator(int mode, double lo, double hi) {
    return ModeObservable{
        mode,
        [lo, hi](double x) { return Complex(x >= lo && x < hi ? 1.0 : 0.0, 0.0); },
        {lo, hi},
        "indicator"};
  }
};

struct BirkhoffResult {
  Complex mean{0, 0};
  std::vector<std::pair<std::int64_t, Complex>> trace;  // dyadic checkpoints
  bool reliable = true;
};

/// (1/N) sum of the observable along the orbit, with partial averages at
/// dyadic checkpoints. Fixed pairwise reduction order.
inline BirkhoffResult birkhoffAverage(const SkewProduct& s,
                                      const ModeObservable& obs,
                                      const SkewPoint& start, std::int64_t n) {
  SkewOrbit orbit = skewOrbit(s, start, n);
  std::vector<Complex> vals(orbit.points.size());
  for (std::size_t k = 0; k < orbit.points.size(); ++k)
    vals[k] = obs(orbit.points[k].x, orbit.points[k].rho);
  BirkhoffResult out;
  out.reliable = orbit.reliable;
  for (std::int64_t c = 1; c < n; c *= 2) {
    Complex partial =
        pairwiseSum(std::span<const Complex>(vals.data(), static_cast<std::size_t>(c)));
    out.trace.emplace_back(c, partial / static_cast<double>(c));
  }
  out.mean = pairwiseSum(vals) / static_cast<double>(n);
  out.trace.emplace_back(n, out.mean);
  return out;
}

/// Fiberwise discrete Fourier coefficient: recovers the E_n component of a
/// sampled function, one base point at a time.
inline std::function<Complex(double)> modeProject(
    const std::function<Complex(double, double)>& f, int n, int fiberGrid) {
  if (fiberGrid < 4 * std::abs(n) + 4)
    throw Error(Err::GridTooCoarse, "fiber grid must have >= 4|n|+4 points");
  return [f, n, fiberGrid](double x) {
    std::vector<Complex> terms(static_cast<std::size_t>(fiberGrid));
    for (int j = 0; j < fiberGrid; ++j) {
      const double rho = static_cast<double>(j) / fiberGrid;
      terms[j] = f(x, rho) * unitPhase(-n * rho);
    }
    return pairwiseSum(terms) / static_cast<double>(fiberGrid);
  };
}

/// Star-discrepancy estimate of orbit points in I x R/Z over the fixed
/// 64 x 64 grid of anchored boxes [0,a) x [0,b) with midpoint anchors.
inline double discrepancy2d(const std::vector<SkewPoint>& pts, double totalX) {
  if (pts.size() < 2)
    throw Error(Err::ValidationError, "need at least two orbit points");
  constexpr int kGrid = 64;
  const double n = static_cast<double>(pts.size());
  // counts[i][j]: points with x/total < (i+0.5)/64 etc., via cell histogram
  std::vector<std::vector<double>> hist(kGrid + 1,
                                        std::vector<double>(kGrid + 1, 0.0));
  for (const SkewPoint& p : pts) {
    const double u = p.x / totalX;
    const double v = p.rho;
    int iu = std::min(kGrid, static_cast<int>(std::floor(u * kGrid + 0.5)));
    int iv = std::min(kGrid, static_cast<int>(std::floor(v * kGrid + 0.5)));
    hist[iu][iv] += 1.0;
  }
  for (int i = 0; i <= kGrid; ++i)
    for (int j = 1; j <= kGrid; ++j) hist[i][j] += hist[i][j - 1];
  for (int j = 0; j <= kGrid; ++j)
    for (int i = 1; i <= kGrid; ++i) hist[i][j] += hist[i - 1][j];
  double worst = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double a = (i + 0.5) / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double b = (j + 0.5) / kGrid;
      worst = std::max(worst, std::abs(hist[i][j] / n - a * b));
    }
  }
  return worst;
}

}  // namespace heisen::skew
