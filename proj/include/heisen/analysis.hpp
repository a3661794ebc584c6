#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "heisen/skew.hpp"

namespace heisen::analysis {

using bundle::SkewProduct;

// -- correlation decay -------------------------------------------------------

struct DecayFit {
  double alphaHat = 0;   // fitted decay exponent of the envelope
  double kHat = 0;       // fitted prefactor
  double r2 = 0;
  bool allZero = false;  // +inf sentinel case
  int blocks = 0;
};

/// Least-squares slope of the log envelope (running max over dyadic lag
/// blocks) against log lag. Exact on planted power laws by anchoring each
/// block at its achieving lag.
inline DecayFit fitDecayExponent(const std::vector<Complex>& series) {
  if (series.size() < 64)
    throw Error(Err::ValidationError, "need at least 64 lags");
  std::vector<double> xs, ys;
  const std::int64_t nMax = static_cast<std::int64_t>(series.size()) - 1;
  for (std::int64_t lo = 1; lo <= nMax; lo *= 2) {
    const std::int64_t hi = std::min(nMax + 1, 2 * lo);
    double best = -1;
    std::int64_t bestN = lo;
    for (std::int64_t n = lo; n < hi; ++n) {
      const double a = std::abs(series[static_cast<std::size_t>(n)]);
      if (a > best) {
        best = a;
        bestN = n;
      }
    }
    if (best <= 0) continue;  // empty or zero block
    xs.push_back(std::log(1.0 + static_cast<double>(bestN)));
    ys.push_back(std::log(best));
  }
  DecayFit fit;
  fit.blocks = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.allZero = true;
    fit.alphaHat = std::numeric_limits<double>::infinity();
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.alphaHat = -slope;
  fit.kHat = std::exp(my - slope * mx);
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

struct SquareSummability {
  std::vector<std::pair<std::int64_t, double>> checkpoints;  // (N, sum to N)
  double lastIncrement = 0;  // gap between the final two dyadic checkpoints
  bool decaying = false;     // increments shrinking across checkpoints
};

/// Partial sums of |C(n)|^2 at dyadic checkpoints.
inline SquareSummability squareSummabilityReport(const std::vector<Complex>& series) {
  SquareSummability out;
  const std::int64_t nMax = static_cast<std::int64_t>(series.size()) - 1;
  double acc = 0;
  std::int64_t next = 1;
  for (std::int64_t n = 1; n <= nMax; ++n) {
    acc += std::norm(series[static_cast<std::size_t>(n)]);
    if (n == next || n == nMax) {
      if (n == next) next *= 2;
      if (out.checkpoints.empty() || out.checkpoints.back().first != n)
        out.checkpoints.emplace_back(n, acc);
    }
  }
  const std::size_t m = out.checkpoints.size();
  if (m >= 2)
    out.lastIncrement = out.checkpoints[m - 1].second - out.checkpoints[m - 2].second;
  if (m >= 3) {
    const double prev =
        out.checkpoints[m - 2].second - out.checkpoints[m - 3].second;
    out.decaying = out.lastIncrement < prev;
  }
  return out;
}

// -- spectral estimation -----------------------------------------------------

struct SpectralEstimate {
  std::vector<double> frequencies;  // [0, 1)
  std::vector<double> density;      // clipped at 0
  std::vector<double> raw;          // untapered sign kept
  std::string window = "blackman";
  int windowLength = 0;
  double negativeLobe = 0;  // bias diagnostic
  double totalMass = 0;     // should match C(0) up to window bias
  std::string provenance;
};

/// Tapered discrete-time Fourier transform of the Hermitian-extended
/// correlation sequence; Blackman taper for low side lobes.
inline SpectralEstimate spectralDensity(const std::vector<Complex>& series,
                                        int windowLength,
                                        const std::string& provenance = "") {
  const int nMax = static_cast<int>(series.size()) - 1;
  if (windowLength > nMax)
    throw Error(Err::WindowTooLong, "window exceeds series length");
  const int L = windowLength;
  const int grid = 4 * L;
  SpectralEstimate out;
  out.windowLength = L;
  out.provenance = provenance;
  out.frequencies.resize(grid);
  out.raw.resize(grid);
  out.density.resize(grid);
  std::vector<double> w(static_cast<std::size_t>(L) + 1);
  for (int n = 0; n <= L; ++n)
    w[n] = 0.42 + 0.5 * std::cos(M_PI * n / L) + 0.08 * std::cos(2 * M_PI * n / L);
  for (int j = 0; j < grid; ++j) {
    const double lam = static_cast<double>(j) / grid;
    Complex acc = w[0] * series[0];
    for (int n = 1; n <= L; ++n) {
      const Complex c = w[n] * series[static_cast<std::size_t>(n)];
      acc += c * unitPhase(-lam * n) + std::conj(c) * unitPhase(lam * n);
    }
    out.frequencies[j] = lam;
    out.raw[j] = acc.real();
    out.density[j] = std::max(0.0, acc.real());
    out.negativeLobe = std::max(out.negativeLobe, -acc.real());
    out.totalMass += acc.real();
  }
  out.totalMass /= grid;
  return out;
}

struct AtomProbe {
  std::vector<std::pair<std::int64_t, double>> maxByN;  // dyadic N -> max modulus
  double finalMax = 0;
  double finalArgLambda = 0;
};

/// Wiener-type point-mass probe: max over a frequency grid of the Cesaro
/// averages (1/N) sum C(n) e^{-2 pi i lambda n}, reported at dyadic N.
inline AtomProbe atomProbe(const std::vector<Complex>& series, int lambdaGrid) {
  if (series.size() < 64)
    throw Error(Err::ValidationError, "need at least 64 lags");
  AtomProbe out;
  const std::int64_t len = static_cast<std::int64_t>(series.size());
  std::vector<Complex> acc(static_cast<std::size_t>(lambdaGrid), Complex(0, 0));
  std::int64_t next = 64;
  for (std::int64_t n = 0; n < len; ++n) {
    for (int j = 0; j < lambdaGrid; ++j)
      acc[j] += series[static_cast<std::size_t>(n)] *
                unitPhase(-static_cast<double>(j) / lambdaGrid * static_cast<double>(n));
    const std::int64_t N = n + 1;
    if (N == next || N == len) {
      if (N == next) next *= 2;
      double best = 0;
      int bestJ = 0;
      for (int j = 0; j < lambdaGrid; ++j) {
        const double v = std::abs(acc[j]) / static_cast<double>(N);
        if (v > best) { best = v; bestJ = j; }
      }
      if (out.maxByN.empty() || out.maxByN.back().first != N)
        out.maxByN.emplace_back(N, best);
      out.finalMax = best;
      out.finalArgLambda = static_cast<double>(bestJ) / lambdaGrid;
    }
  }
  return out;
}

// -- Rokhlin approximate eigenfunctions --------------------------------------

struct RokhlinTower {
  std::vector<double> levelLefts;  // [x_j, x_j + delta), j = 0..height-1
  double delta = 0;
  int height = 0;
};

/// Tower of disjoint intervals along an aperiodic orbit: level width is half
/// the minimal orbit gap, shrunk so no level straddles a breakpoint.
inline RokhlinTower buildRokhlinTower(const iet::IetMap<double>& map, double x0,
                                      int height) {
  auto orbit = iet::ietOrbit<double>(map, x0, height);
  RokhlinTower tower;
  tower.height = height;
  tower.levelLefts.push_back(x0);
  for (int j = 0; j + 1 < height; ++j) tower.levelLefts.push_back(orbit.points[j]);

  std::vector<double> sorted = tower.levelLefts;
  std::sort(sorted.begin(), sorted.end());
  double gap = map.total() - (sorted.back() - sorted.front());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    gap = std::min(gap, sorted[i + 1] - sorted[i]);
  double delta = 0.5 * gap;
  for (double left : tower.levelLefts) {
    for (int k = 0; k < map.size(); ++k) {
      const double b = map.breakpoints[k];
      if (b > left) delta = std::min(delta, b - left);
    }
    delta = std::min(delta, map.total() - left);
  }
  if (!(delta > 1e-13))
    throw Error(Err::TowerConstructionFailed,
                "orbit too short or too close to a breakpoint");
  tower.delta = delta;
  return tower;
}

/// ||f o T - e^{-2 pi i lambda} f|| / ||f|| for a piecewise-constant f,
/// integrated exactly against normalized Lebesgue measure on I.
inline double eigenfunctionDefect(const iet::IetMap<double>& map,
                                  const std::vector<double>& cuts,
                                  const std::function<Complex(double)>& f,
                                  double lambda) {
  const double total = map.total();
  iet::IetMap<double> inv = iet::inverseMap(map);
  std::vector<double> pts{0.0, total};
  for (double c : cuts) {
    if (c > 0 && c < total) pts.push_back(c);
    const double pre = iet::ietApply(inv, c == total ? 0.0 : c).value;
    if (pre > 0 && pre < total) pts.push_back(pre);
  }
  for (int k = 1; k < map.size(); ++k) pts.push_back(map.breakpoints[k]);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return b - a < 1e-14; }),
            pts.end());
  const Complex phase = unitPhase(-lambda);
  double num = 0, den = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double wdt = pts[i + 1] - pts[i];
    if (wdt < 1e-14) continue;
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    const Complex fx = f(mid);
    const Complex ftx = f(iet::ietApply(map, mid).value);
    num += wdt * std::norm(ftx - phase * fx);
    den += wdt * std::norm(fx);
  }
  if (den == 0) throw Error(Err::ValidationError, "zero function");
  return std::sqrt(num / den);
}

struct RokhlinEigenfunction {
  RokhlinTower tower;
  double lambda = 0;
  double defect = 0;
  double bound = 0;  // 2 / sqrt(height)
  std::vector<Complex> levelValues;
};

/// Tower function f = mu(R)^{-1/2} e^{-2 pi i lambda j} on level j; its
/// defect against the target frequency obeys the 2/sqrt(T_k) bound.
/// Fiber-constant towers over the skew product reduce to base towers: the
/// fiber integrates out of both the norm and the defect, so the overload
/// below computes the identical quantity on the product system.
inline RokhlinEigenfunction rokhlinEigenfunction(const iet::IetMap<double>& map,
                                                 double lambda, int height,
                                                 double x0 = 1.0 / 7.0) {
  RokhlinEigenfunction out;
  out.tower = buildRokhlinTower(map, x0, height);
  out.lambda = lambda;
  out.bound = 2.0 / std::sqrt(static_cast<double>(height));

  const double total = map.total();
  const double norm =
      std::sqrt(total / (static_cast<double>(height) * out.tower.delta));
  std::vector<std::pair<double, Complex>> levels;  // sorted by left endpoint
  out.levelValues.resize(static_cast<std::size_t>(height));
  for (int j = 0; j < height; ++j) {
    out.levelValues[j] = norm * unitPhase(-lambda * j);
    levels.emplace_back(out.tower.levelLefts[j], out.levelValues[j]);
  }
  std::sort(levels.begin(), levels.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const double delta = out.tower.delta;
  auto f = [&levels, delta](double x) {
    auto it = std::upper_bound(
        levels.begin(), levels.end(), x,
        [](double v, const auto& lv) { return v < lv.first; });
    if (it == levels.begin()) return Complex(0, 0);
    --it;
    return (x - it->first < delta) ? it->second : Complex(0, 0);
  };
  std::vector<double> cuts;
  for (int j = 0; j < height; ++j) {
    cuts.push_back(out.tower.levelLefts[j]);
    cuts.push_back(out.tower.levelLefts[j] + delta);
  }
  out.defect = eigenfunctionDefect(map, cuts, f, lambda);
  return out;
}

inline RokhlinEigenfunction rokhlinEigenfunction(const SkewProduct& sp,
                                                 double lambda, int height,
                                                 double x0 = 1.0 / 7.0) {
  return rokhlinEigenfunction(sp.base, lambda, height, x0);
}

// -- the cohomological equation ----------------------------------------------

struct CohomResidualReport {
  int mode = 0;
  int basisSize = 0;
  std::int64_t orbitLength = 0;
  double residual = 0;       // RMS of the additive residual
  double normalized = 0;     // residual / RMS target
  bool illConditioned = false;
  std::vector<double> coefficients;  // fitted u, interleaved cos/sin
};

/// Least-squares Fourier candidate for u in  u o T - u = n g (mod 1).
/// Targets are per-increment lifts of n g into (-1/2, 1/2]; after each
/// solve the integer branches are re-selected around the candidate until
/// stable, which is the mod-1-safe linearization.
inline CohomResidualReport cohomologicalResidual(
    const iet::IetMap<double>& map, const std::function<double(double)>& g,
    int mode, int basisSize, std::int64_t orbitLength,
    double x0 = 0.123456789) {
  if (basisSize < 4 || basisSize % 2 != 0)
    throw Error(Err::ValidationError, "basis size must be even and >= 4");
  if (orbitLength < 10 * basisSize)
    throw Error(Err::ValidationError, "orbit must have >= 10 B points");

  const double total = map.total();
  auto orbit = iet::ietOrbit<double>(map, x0, orbitLength);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(orbitLength) + 1);
  xs.push_back(x0);
  for (double p : orbit.points) xs.push_back(p);

  const int nb = basisSize / 2;
  const std::int64_t rows = orbitLength;
  Eigen::MatrixXd a(rows, basisSize);
  Eigen::VectorXd t(rows);
  for (std::int64_t k = 0; k < rows; ++k) {
    const double x = xs[static_cast<std::size_t>(k)];
    const double tx = xs[static_cast<std::size_t>(k) + 1];
    for (int b = 1; b <= nb; ++b) {
      const double wb = kTwoPi * b / total;
      a(k, 2 * (b - 1)) = std::cos(wb * tx) - std::cos(wb * x);
      a(k, 2 * (b - 1) + 1) = std::sin(wb * tx) - std::sin(wb * x);
    }
    t[k] = wrapHalf(mode * g(x));
  }

  CohomResidualReport rep;
  rep.mode = mode;
  rep.basisSize = basisSize;
  rep.orbitLength = orbitLength;

  Eigen::MatrixXd gram = a.transpose() * a;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0) || hi / lo > 1e12) {
      rep.illConditioned = true;
      gram.diagonal().array() += 1e-12 * std::max(1.0, hi);
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  Eigen::VectorXd c;
  for (int pass = 0; pass < 8; ++pass) {
    c = solver.solve(a.transpose() * t);
    Eigen::VectorXd r = a * c - t;
    bool changed = false;
    for (std::int64_t k = 0; k < rows; ++k) {
      const double m = std::round(r[k]);
      if (m != 0) {
        t[k] += m;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Eigen::VectorXd r = a * c - t;
  rep.residual = std::sqrt(r.squaredNorm() / static_cast<double>(rows));
  const double targetRms = std::sqrt(t.squaredNorm() / static_cast<double>(rows));
  rep.normalized = targetRms > 0 ? rep.residual / targetRms : 0.0;
  rep.coefficients.assign(c.data(), c.data() + c.size());
  return rep;
}

/// Invariance defect of a finite mode sum F = sum c_n(x) e^{2 pi i n rho}
/// under the skew product, via the per-mode identity
/// c_n(Tx) e^{2 pi i n g(x)} = c_n(x). Grid RMS, normalized by ||F||.
inline double invarianceDefect(
    const SkewProduct& sp,
    const std::vector<std::pair<int, std::function<Complex(double)>>>& modes,
    int grid = 8192) {
  const double total = sp.base.total();
  double num = 0, den = 0;
  for (const auto& [n, cfn] : modes) {
    for (int j = 0; j < grid; ++j) {
      const double x = (j + 0.5) / grid * total;
      auto step = iet::ietApply(sp.base, x);
      const Complex cx = cfn(x);
      const Complex ctx = cfn(step.value);
      num += std::norm(ctx * unitPhase(n * sp.skewing(x, step.symbol)) - cx);
      den += std::norm(cx);
    }
  }
  if (den == 0) throw Error(Err::ValidationError, "zero candidate");
  return std::sqrt(num / den);
}

/// Minimal invariance defect over a B-dimensional Fourier family of
/// candidate mode-n coefficients: the smallest singular value of the
/// discretized twisted difference operator.
inline double bestInvariantDefect(const SkewProduct& sp, int mode, int basisSize,
                                  int grid = 8192) {
  const double total = sp.base.total();
  std::vector<int> freqs;
  for (int b = 0; static_cast<int>(freqs.size()) < basisSize; ++b) {
    freqs.push_back(b);
    if (static_cast<int>(freqs.size()) < basisSize && b > 0) freqs.push_back(-b);
    if (b == 0) continue;
  }
  Eigen::MatrixXcd m(grid, basisSize);
  for (int j = 0; j < grid; ++j) {
    const double x = (j + 0.5) / grid * total;
    auto step = iet::ietApply(sp.base, x);
    const Complex tw = unitPhase(mode * sp.skewing(x, step.symbol));
    for (int bi = 0; bi < basisSize; ++bi) {
      const double fb = static_cast<double>(freqs[bi]) / total;
      m(j, bi) = unitPhase(fb * step.value) * tw - unitPhase(fb * x);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(grid));
}

}  // namespace heisen::analysis
