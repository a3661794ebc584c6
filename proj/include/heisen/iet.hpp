#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "heisen/error.hpp"
#include "heisen/numeric.hpp"
#include "heisen/rational.hpp"

namespace heisen::iet {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Discontinuity guard for the floating path; orbits that pass closer than
/// this to a breakpoint are flagged, not rejected.
inline constexpr double kGuardEps = 1e-12;

/// Permutations of {1..d} are stored as vectors of 1-based values:
/// perm[i] is the image of i+1.
using Perm = std::vector<int>;

inline bool isBijection(const Perm& p) {
  const int d = static_cast<int>(p.size());
  std::vector<bool> seen(d, false);
  for (int v : p) {
    if (v < 1 || v > d || seen[v - 1]) return false;
    seen[v - 1] = true;
  }
  return true;
}

inline Perm inversePerm(const Perm& p) {
  Perm inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i] - 1] = static_cast<int>(i) + 1;
  return inv;
}

/// Monodromy invariant p = pi1 o pi0^{-1}.
inline Perm monodromy(const Perm& pi0, const Perm& pi1) {
  Perm inv0 = inversePerm(pi0);
  Perm p(pi0.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = pi1[inv0[k] - 1];
  return p;
}

/// A permutation pair is irreducible iff no proper prefix {1..k} is
/// invariant under the monodromy.
inline bool isIrreducible(const Perm& mono) {
  const int d = static_cast<int>(mono.size());
  int maxImage = 0;
  for (int k = 1; k < d; ++k) {
    maxImage = std::max(maxImage, mono[k - 1]);
    if (maxImage <= k) return false;
  }
  return true;
}

/// Validated interval exchange data, canonicalized so that all vector and
/// matrix layouts are in pi0-ascending order (pi0 becomes the identity and
/// the pair is carried by the monodromy alone).
template <typename Scalar>
struct IetSpec {
  std::vector<std::string> symbols;  // pi0-ascending
  Perm mono;                         // p = pi1 o pi0^{-1}
  VectorX<Scalar> lengths;           // pi0-ascending, all > 0

  int size() const { return static_cast<int>(mono.size()); }
  Scalar total() const { return lengths.sum(); }
  int pi1Of(int i) const { return mono[i]; }  // pi1 of the i-th symbol, 0-based i
};

struct RawIet {
  std::vector<std::string> alphabet;
  Perm pi0, pi1;                     // positions per alphabet index
  std::vector<std::string> lengths;  // decimal or "p/q" literals, alphabet order
};

/// Entry rule for the antisymmetric pairing Omega: in pi0 order,
/// Omega_ij = +1 when i precedes j before the exchange but follows it after.
inline Eigen::MatrixXi omegaMatrix(const Perm& mono) {
  const int d = static_cast<int>(mono.size());
  Eigen::MatrixXi omega = Eigen::MatrixXi::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (mono[i] > mono[j]) {
        omega(i, j) = 1;
        omega(j, i) = -1;
      }
  return omega;
}

/// w = Omega_pi(lambda); the translation constant of each exchanged interval.
template <typename Scalar>
VectorX<Scalar> translationVector(const Perm& mono, const VectorX<Scalar>& lambda) {
  const int d = static_cast<int>(mono.size());
  Eigen::MatrixXi omega = omegaMatrix(mono);
  VectorX<Scalar> w(d);
  for (int i = 0; i < d; ++i) {
    Scalar acc{0};
    for (int j = 0; j < d; ++j) {
      if (omega(i, j) == 1) acc += lambda[j];
      else if (omega(i, j) == -1) acc -= lambda[j];
    }
    w[i] = acc;
  }
  return w;
}

/// Singularity bookkeeping: the cycles of sigma on {0..d} index the cone
/// points of any suspension of the exchange.
struct SingularityData {
  std::vector<int> sigma;               // image of j, for j = 0..d
  std::vector<std::vector<int>> orbits; // sorted cycles, deterministic order
  int zeroOrbit = -1;                   // index of the cycle containing 0
};

inline SingularityData sigmaPermutation(const Perm& mono) {
  const int d = static_cast<int>(mono.size());
  const Perm inv = inversePerm(mono);
  SingularityData out;
  out.sigma.resize(d + 1);
  for (int j = 0; j <= d; ++j) {
    if (j == 0)
      out.sigma[j] = inv[0] - 1;           // p^{-1}(1) - 1
    else if (j == inv[d - 1])
      out.sigma[j] = d;                    // j = p^{-1}(d)
    else
      out.sigma[j] = inv[mono[j - 1]] - 1; // p^{-1}(p(j)+1) - 1
  }
  std::vector<bool> seen(d + 1, false);
  for (int start = 0; start <= d; ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    int j = start;
    while (!seen[j]) {
      seen[j] = true;
      cycle.push_back(j);
      j = out.sigma[j];
    }
    std::sort(cycle.begin(), cycle.end());
    if (cycle.front() == 0) out.zeroOrbit = static_cast<int>(out.orbits.size());
    out.orbits.push_back(std::move(cycle));
  }
  return out;
}

/// Kernel basis of Omega: one signed indicator step vector per sigma-cycle
/// away from zero. Entry for the symbol at pi0-position k is
/// chi_O(k) - chi_O(k-1).
inline std::vector<Eigen::VectorXi> kernelBasis(const Perm& mono) {
  const int d = static_cast<int>(mono.size());
  const SingularityData sing = sigmaPermutation(mono);
  std::vector<Eigen::VectorXi> basis;
  for (int oi = 0; oi < static_cast<int>(sing.orbits.size()); ++oi) {
    if (oi == sing.zeroOrbit) continue;
    std::vector<bool> inOrbit(d + 2, false);
    for (int k : sing.orbits[oi]) inOrbit[k] = true;
    Eigen::VectorXi v(d);
    for (int k = 1; k <= d; ++k)
      v[k - 1] = static_cast<int>(inOrbit[k]) - static_cast<int>(inOrbit[k - 1]);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <typename Scalar>
std::vector<Scalar> parseLengths(const std::vector<std::string>& raw);

template <>
inline std::vector<double> parseLengths<double>(const std::vector<std::string>& raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    try {
      out.push_back(Rational::parse(s).toDouble());
    } catch (const std::overflow_error&) {
      out.push_back(std::stod(s));
    } catch (const std::invalid_argument&) {
      try {
        out.push_back(std::stod(s));
      } catch (...) {
        throw Error(Err::ParseError, "bad length literal '" + s + "'");
      }
    }
  }
  return out;
}

template <>
inline std::vector<Rational> parseLengths<Rational>(const std::vector<std::string>& raw) {
  std::vector<Rational> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    try {
      out.push_back(Rational::parse(s));
    } catch (const std::invalid_argument&) {
      throw Error(Err::ParseError, "length '" + s + "' is not exact-representable");
    }
  }
  return out;
}

/// Validates and canonicalizes raw exchange data.
template <typename Scalar>
IetSpec<Scalar> validateIet(const RawIet& raw) {
  const int d = static_cast<int>(raw.alphabet.size());
  if (d < 1) throw Error(Err::ValidationError, "empty alphabet");
  if (static_cast<int>(raw.pi0.size()) != d || static_cast<int>(raw.pi1.size()) != d)
    throw Error(Err::NotABijection, "permutation size differs from alphabet size");
  if (!isBijection(raw.pi0) || !isBijection(raw.pi1))
    throw Error(Err::NotABijection, "pi0/pi1 must be bijections onto {1..d}");
  if (static_cast<int>(raw.lengths.size()) != d)
    throw Error(Err::ValidationError, "length vector size differs from alphabet size");

  std::vector<Scalar> lens = parseLengths<Scalar>(raw.lengths);
  for (int i = 0; i < d; ++i)
    if (!(lens[i] > Scalar{0}))
      throw Error(Err::NonPositiveLength,
                  "length of '" + raw.alphabet[i] + "' must be positive");

  Perm mono = monodromy(raw.pi0, raw.pi1);
  if (!isIrreducible(mono))
    throw Error(Err::ReduciblePermutation, "pair fixes a proper prefix {1..k}");

  IetSpec<Scalar> spec;
  spec.mono = mono;
  spec.symbols.resize(d);
  spec.lengths.resize(d);
  const Perm inv0 = inversePerm(raw.pi0);
  for (int k = 0; k < d; ++k) {
    const int ai = inv0[k] - 1;  // alphabet index at pi0-position k+1
    spec.symbols[k] = raw.alphabet[ai];
    spec.lengths[k] = lens[ai];
  }
  return spec;
}

/// The exchange as a callable map: translation constants plus the left
/// endpoints of the continuity intervals [dI_k, dI_k + lambda_k).
template <typename Scalar>
struct IetMap {
  IetSpec<Scalar> spec;
  VectorX<Scalar> w;
  VectorX<Scalar> breakpoints;

  static IetMap fromSpec(IetSpec<Scalar> s) {
    IetMap m;
    m.w = translationVector<Scalar>(s.mono, s.lengths);
    const int d = s.size();
    m.breakpoints.resize(d);
    Scalar acc{0};
    for (int k = 0; k < d; ++k) {
      m.breakpoints[k] = acc;
      acc += s.lengths[k];
    }
    m.spec = std::move(s);
    return m;
  }

  int size() const { return spec.size(); }
  Scalar total() const { return spec.total(); }

  /// Index of the continuity interval containing x. Precondition: x in [0,|I|).
  int symbolAt(const Scalar& x) const {
    int lo = 0, hi = size() - 1;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (breakpoints[mid] <= x) lo = mid;
      else hi = mid - 1;
    }
    return lo;
  }
};

template <typename Scalar>
struct ApplyResult {
  Scalar value;
  int symbol = 0;
  bool nearDiscontinuity = false;
};

/// Guard query: distance to any breakpoint (or the right endpoint) below
/// the discontinuity guard. The exact path never flags: landing on a
/// breakpoint exactly is an ordinary in-domain point there.
inline bool nearBreakpoint(const IetMap<double>& m, double x) {
  for (int k = 0; k < m.size(); ++k)
    if (std::abs(x - m.breakpoints[k]) < kGuardEps) return true;
  return std::abs(x - m.total()) < kGuardEps;
}
inline bool nearBreakpoint(const IetMap<Rational>&, const Rational&) {
  return false;
}

template <typename Scalar>
ApplyResult<Scalar> ietApply(const IetMap<Scalar>& m, const Scalar& x) {
  if (x < Scalar{0} || !(x < m.total()))
    throw Error(Err::OutOfDomain, "point outside [0,|I|)");
  ApplyResult<Scalar> r;
  r.symbol = m.symbolAt(x);
  r.value = x + m.w[r.symbol];
  r.nearDiscontinuity =
      nearBreakpoint(m, x) || nearBreakpoint(m, r.value);
  return r;
}

/// Inverse exchange: swap the roles of the two orderings. In canonical
/// form that is the exchange with monodromy p^{-1} whose pi0-order data
/// is the original data read in pi1 order.
template <typename Scalar>
IetMap<Scalar> inverseMap(const IetMap<Scalar>& m) {
  const int d = m.size();
  IetSpec<Scalar> s;
  s.mono = inversePerm(m.spec.mono);
  s.symbols.resize(d);
  s.lengths.resize(d);
  for (int i = 0; i < d; ++i) {
    const int k = m.spec.mono[i] - 1;  // pi1-position of symbol i
    s.symbols[k] = m.spec.symbols[i];
    s.lengths[k] = m.spec.lengths[i];
  }
  return IetMap<Scalar>::fromSpec(std::move(s));
}

template <typename Scalar>
struct OrbitResult {
  std::vector<Scalar> points;  // T x0, T^2 x0, ..., T^N x0
  bool reliable = true;        // false if any iterate grazed a breakpoint
};

namespace detail {
inline double wrapMod(double x, double total) {
  double r = std::fmod(x, total);
  if (r < 0) r += total;
  return r;
}
inline Rational wrapMod(const Rational& x, const Rational& total) {
  Rational q = x / total;
  std::int64_t f = q.num() >= 0 ? q.num() / q.den()
                                : -((-q.num() + q.den() - 1) / q.den());
  return x - Rational(f) * total;
}
}  // namespace detail

/// Stepwise orbit of length N. For d = 2 the iterate is closed-form
/// (x0 + n*w_0 mod |I|), avoiding accumulation of rounding error.
template <typename Scalar>
OrbitResult<Scalar> ietOrbit(const IetMap<Scalar>& m, const Scalar& x0, std::int64_t n) {
  if (n < 1) throw Error(Err::ValidationError, "orbit length must be >= 1");
  OrbitResult<Scalar> out;
  out.points.reserve(static_cast<std::size_t>(n));
  if (m.size() == 2) {
    const Scalar total = m.total();
    if (nearBreakpoint(m, x0)) out.reliable = false;
    for (std::int64_t k = 1; k <= n; ++k) {
      Scalar x = detail::wrapMod(x0 + Scalar(k) * m.w[0], total);
      if (nearBreakpoint(m, x)) out.reliable = false;
      out.points.push_back(x);
    }
    return out;
  }
  Scalar x = x0;
  for (std::int64_t k = 0; k < n; ++k) {
    if (x < Scalar{0} || !(x < m.total()))
      throw Error(Err::OutOfDomain, "orbit left the interval");
    auto step = ietApply(m, x);
    if (step.nearDiscontinuity) out.reliable = false;
    x = step.value;
    out.points.push_back(x);
  }
  return out;
}

}  // namespace heisen::iet
