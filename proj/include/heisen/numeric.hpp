#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace heisen {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce to the fundamental domain [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // floor rounding at negative epsilons
  return r;
}

/// Representative of x mod 1 in (-1/2, 1/2].
inline double wrapHalf(double x) {
  double r = x - std::round(x);
  if (r <= -0.5) r += 1.0;
  return r;
}

/// Circular distance on R/Z: min(|x-y| mod 1, 1 - |x-y| mod 1).
inline double circDist(double x, double y) { return std::abs(wrapHalf(x - y)); }

inline Complex unitPhase(double t) {  // e^{2 pi i t}
  return Complex(std::cos(kTwoPi * t), std::sin(kTwoPi * t));
}

/// Pairwise (cascade) summation: fixed association order independent of
/// any surrounding parallel decomposition, so reductions are reproducible.
template <typename T>
T pairwiseSum(std::span<const T> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = xs[0];
    for (std::size_t i = 1; i < n; ++i) acc += xs[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwiseSum(xs.subspan(0, half)) + pairwiseSum(xs.subspan(half));
}

template <typename T>
T pairwiseSum(const std::vector<T>& xs) {
  return pairwiseSum(std::span<const T>(xs));
}

/// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre8 {
  static constexpr std::array<double, 8> nodes = {
      -0.96028985649753623168, -0.79666647741362673959,
      -0.52553240991632898582, -0.18343464249564980494,
      0.18343464249564980494,  0.52553240991632898582,
      0.79666647741362673959,  0.96028985649753623168};
  static constexpr std::array<double, 8> weights = {
      0.10122853629037625915, 0.22238103445337447054,
      0.31370664587788728734, 0.36268378337836198297,
      0.36268378337836198297, 0.31370664587788728734,
      0.22238103445337447054, 0.10122853629037625915};
};

/// Draw from [0, 1) with 53 random bits; avoids the library-defined
/// std::uniform_real_distribution so streams are stable across platforms.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace heisen
