#pragma once

// Largest eigenvalue of a symmetric tridiagonal matrix with constant
// off-diagonal via Sturm-sequence bisection; eigenvector via inverse
// iteration with a pivoted tridiagonal solve. O(size) per bisection step.

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "brw/errors.hpp"
#include "brw/model.hpp"
#include "brw/rng.hpp"

namespace brw {

// Number of eigenvalues strictly below x (LDL^T sign count).
inline int sturm_count_below(std::span<const double> diag, double offdiag, double x) {
  const double e2 = offdiag * offdiag;
  const double pivmin =
      std::numeric_limits<double>::min() * std::max(1.0, e2);
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    d = (diag[i] - x) - (i > 0 ? e2 / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace detail {

// Gaussian elimination with partial pivoting on (T - sigma I); LAPACK
// dgttrf-style storage with a second superdiagonal from row interchanges.
class ShiftedTridiagLU {
 public:
  void factor(std::span<const double> diag, double e, double sigma) {
    m_ = static_cast<int>(diag.size());
    d_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) d_[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] - sigma;
    const std::size_t bands = m_ > 0 ? static_cast<std::size_t>(m_ - 1) : 0;
    du_.assign(bands, e);
    dl_.assign(bands, e);
    du2_.assign(m_ > 1 ? static_cast<std::size_t>(m_ - 2) : 0, 0.0);
    swapped_.assign(bands, false);
    double scale = std::abs(e);
    for (double v : d_) scale = std::max(scale, std::abs(v));
    const double floor = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-30);
    for (int i = 0; i + 1 < m_; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      if (std::abs(d_[k]) >= std::abs(dl_[k])) {
        guard(d_[k], floor);
        const double f = dl_[k] / d_[k];
        dl_[k] = f;
        d_[k + 1] -= f * du_[k];
        if (i + 2 < m_) du2_[k] = 0.0;
      } else {
        const double f = d_[k] / dl_[k];
        d_[k] = dl_[k];
        dl_[k] = f;
        const double tmp = du_[k];
        du_[k] = d_[k + 1];
        d_[k + 1] = tmp - f * d_[k + 1];
        if (i + 2 < m_) {
          du2_[k] = du_[k + 1];
          du_[k + 1] = -f * du_[k + 1];
        }
        swapped_[k] = true;
      }
    }
    if (m_ > 0) guard(d_[static_cast<std::size_t>(m_ - 1)], floor);
  }

  void solve(std::span<double> b) const {
    for (int i = 0; i + 1 < m_; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      if (!swapped_[k]) {
        b[k + 1] -= dl_[k] * b[k];
      } else {
        const double tmp = b[k];
        b[k] = b[k + 1];
        b[k + 1] = tmp - dl_[k] * b[k + 1];
      }
    }
    const std::size_t last = static_cast<std::size_t>(m_ - 1);
    b[last] /= d_[last];
    if (m_ > 1) b[last - 1] = (b[last - 1] - du_[last - 1] * b[last]) / d_[last - 1];
    for (int i = m_ - 3; i >= 0; --i) {
      const std::size_t k = static_cast<std::size_t>(i);
      b[k] = (b[k] - du_[k] * b[k + 1] - du2_[k] * b[k + 2]) / d_[k];
    }
  }

 private:
  static void guard(double& pivot, double floor) {
    if (std::abs(pivot) < floor) pivot = (pivot < 0.0) ? -floor : floor;
  }

  std::vector<double> d_, du_, du2_, dl_;
  std::vector<bool> swapped_;
  int m_ = 0;
};

inline void normalize2(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

}  // namespace detail

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
};

// Largest eigenvalue to absolute accuracy `tol` plus a unit-norm
// eigenvector. Throws numerical_error if inverse iteration cannot reach
// residual 10*tol within a bounded number of restarts.
inline Eigenpair top_eigenpair(const TruncatedOperator& op, double tol) {
  if (!(tol > 0.0)) throw validation_error("top_eigenpair: tol must be positive");
  const int m = op.size();
  const double e = std::abs(op.offdiagonal);
  double lo = op.diagonal[0], hi = op.diagonal[0];
  for (double v : op.diagonal) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi)) + 2.0 * e;
  lo -= 2.0 * e;
  hi += 2.0 * e;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(op.diagonal, op.offdiagonal, mid) >= m)
      hi = mid;
    else
      lo = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  std::mt19937_64 rng(0x5eedULL);
  std::vector<double> v(static_cast<std::size_t>(m));
  std::vector<double> hv(static_cast<std::size_t>(m));
  detail::ShiftedTridiagLU lu;
  const double resid_target = 10.0 * tol;
  double resid = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (double& x : v) x = uniform01(rng) - 0.5;
    detail::normalize2(v);
    // tiny shift offset on retries in case the factorization is unlucky
    lu.factor(op.diagonal, op.offdiagonal, lambda + attempt * 0.25 * tol);
    for (int it = 0; it < 50; ++it) {
      lu.solve(v);
      detail::normalize2(v);
      apply_operator(op, v, hv);
      double rho = 0.0;
      for (int i = 0; i < m; ++i) rho += v[static_cast<std::size_t>(i)] * hv[static_cast<std::size_t>(i)];
      resid = 0.0;
      for (int i = 0; i < m; ++i)
        resid = std::max(resid, std::abs(hv[static_cast<std::size_t>(i)] -
                                         rho * v[static_cast<std::size_t>(i)]));
      if (resid <= std::max(0.05 * resid_target,
                            64.0 * std::numeric_limits<double>::epsilon() * scale))
        break;
    }
    if (resid <= resid_target) break;
  }
  if (!(resid <= resid_target))
    throw numerical_error("top_eigenpair: inverse iteration did not converge");

  // deterministic sign: largest-magnitude entry positive
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
  return Eigenpair{lambda, std::move(v)};
}

}  // namespace brw
