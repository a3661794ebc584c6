#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "heisen/parallel.hpp"
#include "heisen/skew.hpp"

namespace heisen::corr {

using skew::ModeObservable;
using skew::SkewPoint;
using bundle::SkewProduct;

/// Maximal affine piece of x -> (T^n x, G_n(x)): both coordinates are
/// unit-slope / fixed-slope affine between consecutive breakpoint pullbacks.
struct Piece {
  double lo = 0, hi = 0;
  double anchor = 0;    // midpoint where the orbit data was evaluated
  double gAnchor = 0;   // G_n(anchor), unreduced
  double slope = 0;     // sum of the slopes h along the orbit
  double tnAnchor = 0;  // T^n(anchor)
};

struct PieceDecomposition {
  std::vector<Piece> pieces;
  bool reliable = true;
};

/// Cuts of the lag-n integrand: pullbacks of the base breakpoints for
/// 0 <= k < n (kinks of G_n), the n-step pullbacks of the breakpoints and
/// of the discontinuities of F (kinks of F o T^n), plus discontinuities
/// of the lag-0 factor.
inline PieceDecomposition buildPieces(const SkewProduct& s, std::int64_t n,
                                      const std::vector<double>& discF,
                                      const std::vector<double>& discG0) {
  const double total = s.base.total();
  const int d = s.size();
  iet::IetMap<double> inv = iet::inverseMap(s.base);

  std::vector<double> cuts{0.0, total};
  std::vector<double> wave;
  for (int k = 0; k < d; ++k) wave.push_back(s.base.breakpoints[k]);
  for (double x : discG0)
    if (x > 0 && x < total) cuts.push_back(x);
  for (std::int64_t k = 0; k < n; ++k) {
    for (double x : wave)
      if (x > 0 && x < total) cuts.push_back(x);
    for (double& x : wave) x = iet::ietApply(inv, x).value;
  }
  // wave now holds the n-step pullbacks; add them and the pulled-back
  // discontinuities of F.
  for (double x : wave)
    if (x > 0 && x < total) cuts.push_back(x);
  std::vector<double> fcuts = discF;
  for (std::int64_t k = 0; k < n; ++k)
    for (double& x : fcuts) x = iet::ietApply(inv, x).value;
  for (double x : fcuts)
    if (x > 0 && x < total) cuts.push_back(x);

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-13; }),
             cuts.end());
  if (cuts.back() < total - 1e-13) cuts.push_back(total);

  PieceDecomposition out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p;
    p.lo = cuts[i];
    p.hi = cuts[i + 1];
    if (p.hi - p.lo < 1e-13) continue;
    p.anchor = 0.5 * (p.lo + p.hi);
    double x = p.anchor;
    double acc = 0, slope = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      auto step = iet::ietApply(s.base, x);
      if (step.nearDiscontinuity) out.reliable = false;
      acc += s.skewing(x, step.symbol);
      slope += s.slopes[step.symbol];
      x = step.value;
    }
    p.gAnchor = acc;
    p.slope = slope;
    p.tnAnchor = x;
    out.pieces.push_back(p);
  }
  return out;
}

inline std::int64_t minimumMesh(const SkewProduct& s, std::int64_t n) {
  return 4 * (static_cast<std::int64_t>(s.size()) * n + 2);
}

/// <f o T^n, g> for single-mode observables. Orthogonality of the fiber
/// modes collapses the 2-D integral to a 1-D integral against
/// e^{2 pi i m G_n}; each affine-phase piece is integrated by 8-point
/// Gauss-Legendre with doubling refinement.
inline Complex modeCorrelation(const SkewProduct& s, const ModeObservable& f,
                               const ModeObservable& g, std::int64_t n,
                               std::int64_t mesh = 0) {
  if (f.mode != g.mode) return Complex(0, 0);
  const std::int64_t required = minimumMesh(s, n);
  if (mesh == 0) mesh = required;
  if (mesh < required)
    throw Error(Err::MeshTooCoarse, "mesh must resolve all lag breakpoints");

  PieceDecomposition dec = buildPieces(s, n, f.discontinuities, g.discontinuities);
  const double total = s.base.total();
  const int m = f.mode;

  auto evaluate = [&](int refineLevel) {
    std::vector<Complex> contributions(dec.pieces.size());
    for (std::size_t pi = 0; pi < dec.pieces.size(); ++pi) {
      const Piece& p = dec.pieces[pi];
      const double width = p.hi - p.lo;
      int subs = static_cast<int>(
          std::max<std::int64_t>(1, std::llround(static_cast<double>(mesh) * width / total)));
      subs <<= refineLevel;
      std::vector<Complex> parts(static_cast<std::size_t>(subs));
      const double sw = width / subs;
      for (int si = 0; si < subs; ++si) {
        const double a = p.lo + si * sw;
        Complex acc(0, 0);
        for (int q = 0; q < 8; ++q) {
          const double x = a + 0.5 * sw * (1.0 + GaussLegendre8::nodes[q]);
          const double dxa = x - p.anchor;
          const Complex fv = f.baseFn(p.tnAnchor + dxa);
          const Complex gv = g.baseFn(x);
          const double phase = m * (p.gAnchor + p.slope * dxa);
          acc += GaussLegendre8::weights[q] * fv * std::conj(gv) *
                 unitPhase(wrapHalf(phase));
        }
        parts[si] = acc * (0.5 * sw);
      }
      contributions[pi] = pairwiseSum(parts);
    }
    return pairwiseSum(contributions);
  };

  Complex prev = evaluate(0);
  for (int level = 1; level <= 6; ++level) {
    Complex next = evaluate(level);
    if (std::abs(next - prev) < 1e-8) return next;
    prev = next;
  }
  return prev;
}

struct CorrelationSeries {
  enum class Method { Grid, MonteCarlo };
  Method method = Method::Grid;
  std::vector<Complex> values;    // lag 0..nMax
  std::vector<double> stderrs;    // Monte Carlo only (batch means), per lag
  std::int64_t meshSize = 0;      // grid method
  std::int64_t sampleCount = 0;   // Monte Carlo method
  std::uint64_t seed = 0;
  std::string specHash;
};

inline CorrelationSeries correlationSeriesGrid(const SkewProduct& s,
                                               const ModeObservable& f,
                                               const ModeObservable& g,
                                               std::int64_t nMax,
                                               int threads = 1) {
  if (nMax < 1) throw Error(Err::ValidationError, "need nMax >= 1");
  CorrelationSeries out;
  out.method = CorrelationSeries::Method::Grid;
  out.meshSize = minimumMesh(s, nMax);
  out.values.assign(static_cast<std::size_t>(nMax) + 1, Complex(0, 0));
  parallelFor(0, nMax + 1, threads, [&](std::int64_t n) {
    out.values[static_cast<std::size_t>(n)] = modeCorrelation(s, f, g, n);
  });
  return out;
}

/// Single-long-orbit estimator with burn-in; relies on unique ergodicity of
/// the sampled system. Standard errors from 32 batch means.
inline CorrelationSeries correlationSeriesMonteCarlo(
    const SkewProduct& s, const ModeObservable& f, const ModeObservable& g,
    std::int64_t nMax, std::int64_t samples, std::uint64_t seed,
    int threads = 1, std::int64_t burnin = 1000) {
  if (nMax < 1) throw Error(Err::ValidationError, "need nMax >= 1");
  std::mt19937_64 rng(seed);
  SkewPoint start{uniform01(rng) * s.base.total(), uniform01(rng)};
  skew::SkewOrbit orbit = skewOrbit(s, start, burnin + samples + nMax);

  const std::int64_t k0 = burnin;
  std::vector<Complex> fv(orbit.points.size()), gv(orbit.points.size());
  for (std::size_t k = static_cast<std::size_t>(k0); k < orbit.points.size(); ++k) {
    fv[k] = f(orbit.points[k].x, orbit.points[k].rho);
    gv[k] = g(orbit.points[k].x, orbit.points[k].rho);
  }

  CorrelationSeries out;
  out.method = CorrelationSeries::Method::MonteCarlo;
  out.sampleCount = samples;
  out.seed = seed;
  out.values.assign(static_cast<std::size_t>(nMax) + 1, Complex(0, 0));
  out.stderrs.assign(static_cast<std::size_t>(nMax) + 1, 0.0);

  constexpr int kBatches = 32;
  parallelFor(0, nMax + 1, threads, [&](std::int64_t n) {
    const std::int64_t per = samples / kBatches;
    std::vector<Complex> batchMeans(kBatches);
    for (int bi = 0; bi < kBatches; ++bi) {
      std::vector<Complex> terms(static_cast<std::size_t>(per));
      for (std::int64_t j = 0; j < per; ++j) {
        const std::size_t k = static_cast<std::size_t>(k0 + bi * per + j);
        terms[static_cast<std::size_t>(j)] = fv[k + n] * std::conj(gv[k]);
      }
      batchMeans[bi] = pairwiseSum(terms) / static_cast<double>(per);
    }
    Complex mean = pairwiseSum(batchMeans) / static_cast<double>(kBatches);
    double var = 0;
    for (const Complex& bm : batchMeans) var += std::norm(bm - mean);
    var /= (kBatches - 1);
    out.values[static_cast<std::size_t>(n)] = mean;
    out.stderrs[static_cast<std::size_t>(n)] = std::sqrt(var / kBatches);
  });
  return out;
}

}  // namespace heisen::corr
