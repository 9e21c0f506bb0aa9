#pragma once

// Small dense-matrix helpers: determinant by row-pivoted Gaussian
// elimination and a pivoted LU solve used for nullspace inverse iteration.
// Matrices are row-major and small (a dozen rows at most), so O(m^3) with
// no blocking is the right tool.

#include <cmath>
#include <span>
#include <vector>

#include "brw/errors.hpp"

namespace brw {

// Determinant with partial pivoting; destroys `a` (row-major m x m).
inline double det_inplace(std::span<double> a, int m) {
  double det = 1.0;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    double best = std::abs(a[static_cast<std::size_t>(col) * m + col]);
    for (int r = col + 1; r < m; ++r) {
      const double v = std::abs(a[static_cast<std::size_t>(r) * m + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = col; c < m; ++c)
        std::swap(a[static_cast<std::size_t>(piv) * m + c],
                  a[static_cast<std::size_t>(col) * m + c]);
      det = -det;
    }
    const double d = a[static_cast<std::size_t>(col) * m + col];
    det *= d;
    for (int r = col + 1; r < m; ++r) {
      const double f = a[static_cast<std::size_t>(r) * m + col] / d;
      if (f == 0.0) continue;
      for (int c = col + 1; c < m; ++c)
        a[static_cast<std::size_t>(r) * m + c] -=
            f * a[static_cast<std::size_t>(col) * m + c];
    }
  }
  return det;
}

inline double det_copy(const std::vector<double>& a, int m) {
  std::vector<double> buf = a;
  return det_inplace(buf, m);
}

// LU factorization with partial pivoting. Pivots smaller in magnitude than
// `pivot_floor` are replaced (sign-preserving) so that solves against a
// numerically singular matrix still run — exactly what inverse iteration
// wants.
class DenseLU {
 public:
  void factor(std::vector<double> a, int m, double pivot_floor) {
    lu_ = std::move(a);
    m_ = m;
    piv_.resize(static_cast<std::size_t>(m));
    for (int col = 0; col < m; ++col) {
      int piv = col;
      double best = std::abs(lu_[idx(col, col)]);
      for (int r = col + 1; r < m; ++r) {
        const double v = std::abs(lu_[idx(r, col)]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      piv_[static_cast<std::size_t>(col)] = piv;
      if (piv != col)
        for (int c = 0; c < m; ++c) std::swap(lu_[idx(piv, c)], lu_[idx(col, c)]);
      double d = lu_[idx(col, col)];
      if (std::abs(d) < pivot_floor) {
        d = (d < 0.0) ? -pivot_floor : pivot_floor;
        lu_[idx(col, col)] = d;
      }
      for (int r = col + 1; r < m; ++r) {
        const double f = lu_[idx(r, col)] / d;
        lu_[idx(r, col)] = f;
        for (int c = col + 1; c < m; ++c) lu_[idx(r, c)] -= f * lu_[idx(col, c)];
      }
    }
  }

  void solve(std::span<double> x) const {
    for (int col = 0; col < m_; ++col) {
      const int p = piv_[static_cast<std::size_t>(col)];
      if (p != col) std::swap(x[static_cast<std::size_t>(p)], x[static_cast<std::size_t>(col)]);
      for (int r = col + 1; r < m_; ++r)
        x[static_cast<std::size_t>(r)] -= lu_[idx(r, col)] * x[static_cast<std::size_t>(col)];
    }
    for (int r = m_ - 1; r >= 0; --r) {
      double s = x[static_cast<std::size_t>(r)];
      for (int c = r + 1; c < m_; ++c) s -= lu_[idx(r, c)] * x[static_cast<std::size_t>(c)];
      x[static_cast<std::size_t>(r)] = s / lu_[idx(r, r)];
    }
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) +
           static_cast<std::size_t>(c);
  }

  std::vector<double> lu_;
  std::vector<int> piv_;
  int m_ = 0;
};

}  // namespace brw
