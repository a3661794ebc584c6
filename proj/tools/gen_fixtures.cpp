// Regenerates tests/fixtures/golden_floors.hpp.
//
// Computes, with free-standing code (no library calls on the measured path),
// the least-squares cohomological residuals and the best-invariant defect of
// the golden-torus skew product, and prints floor values at half the measured
// level. Committed fixtures must be reproduced by:
//
//   cmake --build build --target gen_fixtures
//   ./build/tools/gen_fixtures > tests/fixtures/golden_floors.hpp

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

namespace {

constexpr double kAlpha = 0.61803398874989484820;  // (sqrt 5 - 1) / 2
constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double x) { return x - std::floor(x); }

// golden rotation and its skewing function g(x) = x - dI_a (unit slopes,
// zero offsets, lambda = (1 - alpha, alpha))
double rotate(double x) { return frac(x + kAlpha); }
double skewing(double x) { return x < 1.0 - kAlpha ? x : x - (1.0 - kAlpha); }

double cohomResidual(int basis, int orbitLen, double x0) {
  std::vector<double> xs(orbitLen + 1);
  xs[0] = x0;
  for (int k = 0; k < orbitLen; ++k) xs[k + 1] = rotate(xs[k]);
  const int nb = basis / 2;
  Eigen::MatrixXd a(orbitLen, basis);
  Eigen::VectorXd t(orbitLen);
  for (int k = 0; k < orbitLen; ++k) {
    for (int b = 1; b <= nb; ++b) {
      a(k, 2 * (b - 1)) =
          std::cos(kTwoPi * b * xs[k + 1]) - std::cos(kTwoPi * b * xs[k]);
      a(k, 2 * (b - 1) + 1) =
          std::sin(kTwoPi * b * xs[k + 1]) - std::sin(kTwoPi * b * xs[k]);
    }
    const double v = skewing(xs[k]);
    t[k] = v - std::round(v);
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(a.transpose() * a);
  Eigen::VectorXd c;
  for (int pass = 0; pass < 8; ++pass) {
    c = solver.solve(a.transpose() * t);
    Eigen::VectorXd r = a * c - t;
    bool changed = false;
    for (int k = 0; k < orbitLen; ++k) {
      const double m = std::round(r[k]);
      if (m != 0) {
        t[k] += m;
        changed = true;
      }
    }
    if (!changed) break;
  }
  const Eigen::VectorXd r = a * c - t;
  return std::sqrt(r.squaredNorm() / orbitLen);
}

double bestInvariantDefect(int basis, int grid) {
  std::vector<int> freqs;
  for (int b = 0; static_cast<int>(freqs.size()) < basis; ++b) {
    freqs.push_back(b);
    if (static_cast<int>(freqs.size()) < basis && b > 0) freqs.push_back(-b);
  }
  Eigen::MatrixXcd m(grid, basis);
  const std::complex<double> i2pi(0.0, kTwoPi);
  for (int j = 0; j < grid; ++j) {
    const double x = (j + 0.5) / grid;
    const double tx = rotate(x);
    const std::complex<double> tw = std::exp(i2pi * skewing(x));
    for (int bi = 0; bi < basis; ++bi) {
      const double f = freqs[bi];
      m(j, bi) = std::exp(i2pi * (f * tx)) * tw - std::exp(i2pi * (f * x));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(grid));
}

}  // namespace

int main() {
  std::printf("#pragma once\n\n");
  std::printf("// Generated by tools/gen_fixtures.cpp -- do not edit by hand.\n");
  std::printf("// Regenerate: ./build/tools/gen_fixtures > tests/fixtures/golden_floors.hpp\n");
  std::printf("//\n");
  std::printf("// Floors are half the brute-force least-squares values measured on the\n");
  std::printf("// golden-torus skew product (unit slopes, zero offsets), orbit length\n");
  std::printf("// 4096 from x0 = 0.123456789, n = 1.\n\n");
  std::printf("namespace fixtures {\n\n");
  std::printf("inline constexpr int kCohomBasis[] = {8, 16, 32, 64};\n");
  std::printf("inline constexpr double kCohomResidualFloor[] = {\n");
  for (int basis : {8, 16, 32, 64}) {
    const double r = cohomResidual(basis, 4096, 0.123456789);
    std::printf("    %.12f,  // measured %.12f at B = %d\n", 0.5 * r, r, basis);
  }
  std::printf("};\n\n");
  const double defect = bestInvariantDefect(64, 8192);
  std::printf(
      "// best-invariant defect over 64 Fourier modes on an 8192 grid\n");
  std::printf("inline constexpr double kInvariantDefectFloor = %.12f;  // measured %.12f\n",
              0.5 * defect, defect);
  std::printf("\n}  // namespace fixtures\n");
  return 0;
}
