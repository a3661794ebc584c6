#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <optional>
#include <vector>

#include "heisen/linalg.hpp"

namespace heisen::lp {

using linalg::MatrixX;
using linalg::VectorX;
using linalg::kExactField;

enum class Status { Optimal, Infeasible, Unbounded };

template <typename S>
struct Solution {
  Status status = Status::Infeasible;
  S value{0};
  VectorX<S> x;
};

/// Dense two-phase tableau simplex with Bland's rule, templated over the
/// scalar field: exact over Rational, thresholded over double. Sized for
/// the small feasibility systems of the suspension cones (tens of columns).
template <typename S>
class Simplex {
 public:
  /// maximize c.x subject to A x <= b, x >= 0 (b of any sign).
  static Solution<S> maximize(MatrixX<S> a, VectorX<S> b, VectorX<S> c) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    Simplex sx;
    sx.m_ = m;
    sx.n_ = n;
    sx.scale_ = S{1};
    if constexpr (!kExactField<S>) {
      for (int i = 0; i < m; ++i) {
        sx.scale_ = std::max<S>(sx.scale_, std::abs(b[i]));
        for (int j = 0; j < n; ++j) sx.scale_ = std::max<S>(sx.scale_, std::abs(a(i, j)));
      }
    }

    // Equality form with slack and artificial columns; rows normalized to b >= 0.
    const int cols = n + m + m;
    sx.t_ = MatrixX<S>::Zero(m, cols + 1);
    for (int i = 0; i < m; ++i) {
      const bool flip = b[i] < S{0};
      for (int j = 0; j < n; ++j) sx.t_(i, j) = flip ? -a(i, j) : a(i, j);
      sx.t_(i, n + i) = flip ? S{-1} : S{1};  // slack
      sx.t_(i, n + m + i) = S{1};             // artificial
      sx.t_(i, cols) = flip ? -b[i] : b[i];
    }
    sx.basis_.resize(m);
    for (int i = 0; i < m; ++i) sx.basis_[i] = n + m + i;

    // Phase 1: drive the artificial mass to zero.
    VectorX<S> phase1 = VectorX<S>::Zero(cols);
    for (int i = 0; i < m; ++i) phase1[n + m + i] = S{-1};
    sx.firstArtificial_ = n + m;
    Solution<S> probe = sx.run(phase1, /*excludeArtificials=*/false);
    if (probe.status == Status::Unbounded) return {Status::Infeasible, S{0}, {}};
    if (!sx.negligible(probe.value)) return {Status::Infeasible, S{0}, {}};

    // Drive leftover artificials out of the basis; rows that cannot pivot
    // are identically zero (redundant constraints) and stay inert.
    for (int i = 0; i < m; ++i) {
      if (sx.basis_[i] < sx.firstArtificial_) continue;
      for (int j = 0; j < sx.firstArtificial_; ++j) {
        if (!sx.negligible(sx.t_(i, j))) {
          sx.pivot(i, j);
          break;
        }
      }
    }

    // Phase 2 on the original objective; artificials may no longer enter.
    VectorX<S> full = VectorX<S>::Zero(cols);
    for (int j = 0; j < n; ++j) full[j] = c[j];
    Solution<S> best = sx.run(full, /*excludeArtificials=*/true);
    if (best.status != Status::Optimal) return best;
    best.x = VectorX<S>::Zero(n);
    for (int i = 0; i < m; ++i)
      if (sx.basis_[i] < n) best.x[sx.basis_[i]] = sx.t_(i, cols);
    return best;
  }

 private:
  bool negligible(const S& v) const {
    if constexpr (kExactField<S>) return v.isZero();
    else return std::abs(v) <= scale_ * 1e-10;
  }
  bool positive(const S& v) const {
    if constexpr (kExactField<S>) return v > S{0};
    else return v > scale_ * 1e-10;
  }

  Solution<S> run(const VectorX<S>& cost, bool excludeArtificials) {
    const int cols = static_cast<int>(t_.cols()) - 1;
    for (;;) {
      // reduced costs z_j - c_j from the current basis (Bland: first improving)
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (excludeArtificials && j >= firstArtificial_) break;
        bool inBasis = false;
        for (int i = 0; i < m_; ++i)
          if (basis_[i] == j) { inBasis = true; break; }
        if (inBasis) continue;
        S zj{0};
        for (int i = 0; i < m_; ++i) {
          const S& cb = cost[basis_[i]];
          if (!(cb == S{0})) zj += cb * t_(i, j);
        }
        S red = zj - cost[j];
        if (positive(-red)) { enter = j; break; }
      }
      if (enter < 0) break;

      int leave = -1;
      S bestRatio{0};
      for (int i = 0; i < m_; ++i) {
        if (!positive(t_(i, enter))) continue;
        S ratio = t_(i, cols) / t_(i, enter);
        if (leave < 0 || ratio < bestRatio ||
            (ratio == bestRatio && basis_[i] < basis_[leave])) {
          leave = i;
          bestRatio = ratio;
        }
      }
      if (leave < 0) return {Status::Unbounded, S{0}, {}};
      pivot(leave, enter);
    }
    S value{0};
    for (int i = 0; i < m_; ++i) {
      const S& cb = cost[basis_[i]];
      if (!(cb == S{0})) value += cb * t_(i, cols);
    }
    return {Status::Optimal, value, {}};
  }

  void pivot(int row, int col) {
    S inv = S{1} / t_(row, col);
    t_.row(row) *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      S f = t_(i, col);
      if (negligible(f)) continue;
      t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  MatrixX<S> t_;
  std::vector<int> basis_;
  int m_ = 0, n_ = 0, firstArtificial_ = 0;
  S scale_{1};
};

template <typename S>
struct SlackResult {
  bool feasible = false;
  S slack{0};       // optimal min-slack (capped)
  VectorX<S> point; // the achieving free variables, size k
};

/// maximize t subject to G y + g >= t * 1 over free y, with t capped so the
/// program is bounded. Answers open-polyhedron membership questions: the
/// system is strictly feasible iff the returned slack is positive.
template <typename S>
SlackResult<S> maximinSlack(const MatrixX<S>& g, const VectorX<S>& rhs, const S& tCap) {
  const int m = static_cast<int>(g.rows());
  const int k = static_cast<int>(g.cols());
  SlackResult<S> out;
  if (m == 0) {
    out.feasible = true;
    out.slack = tCap;
    out.point = VectorX<S>::Zero(k);
    return out;
  }
  if (k == 0) {  // nothing to optimize: slack is min of the constants
    S t = rhs[0];
    for (int i = 1; i < m; ++i) t = std::min<S>(t, rhs[i]);
    out.feasible = true;
    out.slack = std::min<S>(t, tCap);
    out.point = VectorX<S>::Zero(0);
    return out;
  }

  // Variables (all >= 0): y = u - v (k each), t = tp - tn.
  // Constraints: -G u + G v + tp - tn <= g ; tp - tn <= tCap.
  const int n = 2 * k + 2;
  MatrixX<S> a = MatrixX<S>::Zero(m + 1, n);
  VectorX<S> b(m + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) {
      a(i, j) = -g(i, j);
      a(i, k + j) = g(i, j);
    }
    a(i, 2 * k) = S{1};
    a(i, 2 * k + 1) = S{-1};
    b[i] = rhs[i];
  }
  a(m, 2 * k) = S{1};
  a(m, 2 * k + 1) = S{-1};
  b[m] = tCap;
  VectorX<S> c = VectorX<S>::Zero(n);
  c[2 * k] = S{1};
  c[2 * k + 1] = S{-1};

  Solution<S> sol = Simplex<S>::maximize(std::move(a), std::move(b), std::move(c));
  if (sol.status != Status::Optimal) return out;  // not feasible/bounded
  out.feasible = true;
  out.slack = sol.value;
  out.point = VectorX<S>(k);
  for (int j = 0; j < k; ++j) out.point[j] = sol.x[j] - sol.x[k + j];
  return out;
}

}  // namespace heisen::lp
