#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <type_traits>
#include <vector>

#include "heisen/rational.hpp"

namespace heisen::linalg {

template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
inline constexpr bool kExactField = std::is_same_v<S, Rational>;

namespace detail {
template <typename S>
S absVal(const S& x) {
  using std::abs;
  return abs(x);
}
template <typename S>
bool negligible(const S& x, const S& scale) {
  if constexpr (kExactField<S>) {
    (void)scale;
    return x.isZero();
  } else {
    return absVal(x) <= scale * 1e-12;
  }
}
}  // namespace detail

template <typename S>
struct Reduction {
  MatrixX<S> rref;
  std::vector<int> pivotCols;
  int rank = 0;
};

/// Gauss-Jordan over an ordered field; exact for Rational entries,
/// scaled-threshold pivoting for doubles. Works on small dense systems.
template <typename S>
Reduction<S> rowReduce(MatrixX<S> a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  S scale{1};
  if constexpr (!kExactField<S>) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  Reduction<S> out;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    S best{0};
    for (int r = row; r < rows; ++r) {
      S v = detail::absVal(a(r, col));
      if (!detail::negligible(v, scale) && (piv < 0 || best < v)) {
        piv = r;
        best = v;
        if constexpr (kExactField<S>) break;  // any nonzero pivot is exact
      }
    }
    if (piv < 0) continue;
    a.row(piv).swap(a.row(row));
    S inv = S{1} / a(row, col);
    a.row(row) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      S f = a(r, col);
      if (detail::negligible(detail::absVal(f), scale)) continue;
      a.row(r) -= f * a.row(row);
    }
    out.pivotCols.push_back(col);
    ++row;
  }
  out.rank = row;
  out.rref = std::move(a);
  return out;
}

template <typename S>
int rank(const MatrixX<S>& a) {
  return rowReduce<S>(a).rank;
}

/// Basis of { x : A x = 0 }, one vector per free column.
template <typename S>
std::vector<VectorX<S>> nullspace(const MatrixX<S>& a) {
  Reduction<S> red = rowReduce<S>(a);
  const int cols = static_cast<int>(a.cols());
  std::vector<bool> isPivot(cols, false);
  for (int c : red.pivotCols) isPivot[c] = true;
  std::vector<VectorX<S>> basis;
  for (int free = 0; free < cols; ++free) {
    if (isPivot[free]) continue;
    VectorX<S> v = VectorX<S>::Zero(cols);
    v[free] = S{1};
    for (int r = 0; r < red.rank; ++r)
      v[red.pivotCols[r]] = -red.rref(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Particular solution of A x = b with free variables set to zero, or
/// nullopt if the system is inconsistent.
template <typename S>
std::optional<VectorX<S>> solveConsistent(const MatrixX<S>& a, const VectorX<S>& b) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  MatrixX<S> aug(rows, cols + 1);
  aug.leftCols(cols) = a;
  aug.col(cols) = b;
  Reduction<S> red = rowReduce<S>(std::move(aug));
  for (int c : red.pivotCols)
    if (c == cols) return std::nullopt;  // pivot in the rhs column
  VectorX<S> x = VectorX<S>::Zero(cols);
  for (int r = 0; r < red.rank; ++r) x[red.pivotCols[r]] = red.rref(r, cols);
  return x;
}

}  // namespace heisen::linalg
