#pragma once

// Fourier-side closed forms. A positive eigenvalue lambda of H_n maps to
// zeta in (0,1) via
//
//   zeta = (lambda + kappa - sqrt(lambda(lambda + 2 kappa)))/kappa,
//   r(zeta) = kappa (1 - zeta^2) / (2 zeta),
//   lambda(zeta) = sqrt(kappa^2 + r^2) - kappa,
//
// and the eigenfunction values at the source sites solve an (n+1)x(n+1)
// linear system whose determinant Delta(zeta) has a root of multiplicity n
// at zeta = 1. Deflation is done analytically: replacing rows 1..n by
// (row_l - row_{l-1})/(zeta - 1) is a polynomial identity (every differenced
// entry carries an exact (zeta - 1) factor), so Delta_1 = Delta/(zeta-1)^n
// is evaluated stably on all of [0, 1] — at zeta = 1 the raw determinant
// is ~(1-zeta)^n and its floating-point sign is pure noise, while the
// deflated form satisfies Delta_1(1) = 2^n J_n exactly.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "brw/criticality.hpp"
#include "brw/dense.hpp"
#include "brw/errors.hpp"
#include "brw/model.hpp"

namespace brw {

// lambda(zeta) = sqrt(kappa^2 + r^2) - kappa; strictly decreasing in zeta,
// zero at zeta = 1.
inline double zeta_to_lambda(double zeta, double kappa) {
  if (!(kappa > 0.0)) throw validation_error("zeta_to_lambda: kappa must be positive");
  if (!(zeta > 0.0) || !(zeta <= 1.0))
    throw validation_error("zeta_to_lambda: zeta must lie in (0, 1]");
  const double r = kappa * (1.0 - zeta * zeta) / (2.0 * zeta);
  // sqrt(kappa^2+r^2) - kappa without cancellation for small r
  return r * r / (std::hypot(kappa, r) + kappa);
}

inline double lambda_to_zeta(double lambda, double kappa) {
  if (!(kappa > 0.0)) throw validation_error("lambda_to_zeta: kappa must be positive");
  if (!(lambda > 0.0)) throw validation_error("lambda_to_zeta: lambda must be positive");
  // (lambda + kappa - sqrt(lambda(lambda+2kappa)))/kappa, rationalized
  return kappa / (lambda + kappa + std::sqrt(lambda * (lambda + 2.0 * kappa)));
}

// int_{-pi}^{pi} cos(n t) / (a - b cos t) dt = 2 pi z1^|n| / sqrt(a^2-b^2),
// z1 = (a - sqrt(a^2-b^2))/b, for a > b > 0.
inline double cosine_poisson_integral(int n, double a, double b) {
  if (!(b > 0.0) || !(a > b))
    throw validation_error("cosine_poisson_integral: need a > b > 0 (integrable pole)");
  const double s = std::sqrt((a - b) * (a + b));
  const double z1 = b / (a + s);  // rationalized (a - s)/b
  return 2.0 * std::numbers::pi * std::pow(z1, std::abs(n)) / s;
}

// The (n+1)x(n+1) source-site system. Row l, l = 0..n:
//   column 0:        2 beta zeta^{l+1} - kappa (1 - zeta^2) [l = 0]
//   column k >= 1:  -2 b0 (zeta^{|k-l|+1} + zeta^{k+l+1})
//                    - kappa (1 - zeta^2) [l = k]
struct DeltaSystem {
  int n = 0;
  double kappa = 1.0;
  double beta = 0.0;
  double b0 = 0.0;
};

inline DeltaSystem make_delta_system(const ModelParams& p) {
  return DeltaSystem{p.n, p.kappa, p.beta(), p.b0};
}

inline void fill_delta_matrix(const DeltaSystem& s, double z, std::span<double> a) {
  const int m = s.n + 1;
  const double kz = s.kappa * (1.0 - z * z);
  for (int l = 0; l < m; ++l) {
    double* row = a.data() + static_cast<std::size_t>(l) * m;
    row[0] = 2.0 * s.beta * std::pow(z, l + 1) - (l == 0 ? kz : 0.0);
    for (int k = 1; k < m; ++k) {
      row[k] = -2.0 * s.b0 * (std::pow(z, std::abs(k - l) + 1) + std::pow(z, k + l + 1)) -
               (l == k ? kz : 0.0);
    }
  }
}

// Deflated system: row 0 unchanged, rows 1..n replaced by the exact
// polynomial (row_l - row_{l-1})/(zeta - 1). Row 1's first column picks up
// -kappa(1 + zeta) from row 0's diagonal term.
inline void fill_deflated_matrix(const DeltaSystem& s, double z, std::span<double> a) {
  const int m = s.n + 1;
  a[0] = 2.0 * s.beta * z - s.kappa * (1.0 - z * z);
  for (int k = 1; k < m; ++k)
    a[static_cast<std::size_t>(k)] = -4.0 * s.b0 * std::pow(z, k + 1);
  for (int l = 1; l < m; ++l) {
    double* row = a.data() + static_cast<std::size_t>(l) * m;
    row[0] = 2.0 * s.beta * std::pow(z, l) - (l == 1 ? s.kappa * (1.0 + z) : 0.0);
    for (int k = 1; k < m; ++k) {
      double v = (l <= k ? 2.0 * s.b0 * std::pow(z, k - l + 1)
                         : -2.0 * s.b0 * std::pow(z, l - k)) -
                 2.0 * s.b0 * std::pow(z, k + l);
      if (l == k) v += s.kappa * (1.0 + z);
      if (k == l - 1) v -= s.kappa * (1.0 + z);
      row[k] = v;
    }
  }
}

inline double delta_det(const DeltaSystem& s, double zeta) {
  if (!(zeta >= 0.0) || !(zeta <= 1.0))
    throw validation_error("delta_det: zeta must lie in [0, 1]");
  const int m = s.n + 1;
  std::vector<double> buf(static_cast<std::size_t>(m) * m);
  fill_delta_matrix(s, zeta, buf);
  return det_inplace(buf, m);
}

// Delta(zeta)/(zeta-1)^n, stable on all of [0, 1]. At zeta = 0 this equals
// -kappa^{n+1}; at zeta = 1 it equals 2^n J_n.
inline double delta_deflated(const DeltaSystem& s, double zeta) {
  if (!(zeta >= 0.0) || !(zeta <= 1.0))
    throw validation_error("delta_deflated: zeta must lie in [0, 1]");
  const int m = s.n + 1;
  std::vector<double> buf(static_cast<std::size_t>(m) * m);
  fill_deflated_matrix(s, zeta, buf);
  return det_inplace(buf, m);
}

struct SpectralSolution {
  double zeta_root = 0.0;               // in (0, 1)
  double lambda = 0.0;                  // zeta_to_lambda(zeta_root)
  std::vector<double> f_sources;        // f(0..n), normalized f(0) = 1
  double decay_ratio = 0.0;             // = zeta_root
};

namespace detail {

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Nullspace direction of Delta(zeta) by inverse iteration on M^T M,
// normalized to f(0) = 1.
inline std::vector<double> null_vector(const DeltaSystem& sys, double zeta) {
  const int m = sys.n + 1;
  if (m == 1) return {1.0};
  std::vector<double> M(static_cast<std::size_t>(m) * m);
  fill_delta_matrix(sys, zeta, M);
  std::vector<double> A(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int r = 0; r < m; ++r)
        s += M[static_cast<std::size_t>(r) * m + i] * M[static_cast<std::size_t>(r) * m + j];
      A[static_cast<std::size_t>(i) * m + j] = s;
    }
  double norm = 0.0;
  for (double v : A) norm = std::max(norm, std::abs(v));
  DenseLU lu;
  lu.factor(std::move(A), m,
            std::numeric_limits<double>::epsilon() * std::max(norm, 1e-30) * m);
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = 1.0 / (1.0 + i);
  for (int it = 0; it < 8; ++it) {
    lu.solve(v);
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
  }
  if (std::abs(v[0]) < 1e-8)
    throw numerical_error("spectral solution: nullspace has f(0) ~ 0, cannot normalize");
  std::vector<double> f(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) f[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / v[0];
  return f;
}

}  // namespace detail

// Locates the unique root of Delta_1 on (0, 1) if it exists. Returns
// nullopt iff there is no sign change (beta at or below the threshold).
// Throws invariant_violation if the 1e4-point scan sees more than one sign
// change, which would contradict the uniqueness theorem.
inline std::optional<SpectralSolution> find_spectral_solution(const ModelParams& p,
                                                              double tol) {
  if (!(tol > 0.0)) throw validation_error("find_spectral_solution: tol must be positive");
  const DeltaSystem sys = make_delta_system(p);
  constexpr int kGrid = 10'000;
  int changes = 0;
  int bracket_hi = -1;
  double prev_nonzero = delta_deflated(sys, 0.0);  // = -kappa^{n+1} < 0
  int prev_sign = detail::sign_of(prev_nonzero);
  for (int i = 1; i <= kGrid; ++i) {
    const double z = static_cast<double>(i) / kGrid;
    const double v = delta_deflated(sys, z);
    const int s = detail::sign_of(v);
    if (s != 0 && prev_sign != 0 && s != prev_sign) {
      ++changes;
      if (bracket_hi < 0) bracket_hi = i;
    }
    if (s != 0) prev_sign = s;
  }
  if (changes > 1)
    throw invariant_violation(
        "find_spectral_solution: multiple sign changes of the deflated determinant on "
        "(0,1) contradict the uniqueness of the positive eigenvalue");
  if (changes == 0) return std::nullopt;

  double hi = static_cast<double>(bracket_hi) / kGrid;
  double lo = hi;
  double flo = -1.0;
  // walk lo back over any exact-zero grid points to a signed value
  for (int i = bracket_hi - 1; i >= 0; --i) {
    lo = static_cast<double>(i) / kGrid;
    flo = delta_deflated(sys, lo);
    if (flo != 0.0) break;
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = delta_deflated(sys, mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (detail::sign_of(fm) == detail::sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  SpectralSolution sol;
  sol.zeta_root = 0.5 * (lo + hi);
  sol.lambda = zeta_to_lambda(sol.zeta_root, p.kappa);
  sol.f_sources = detail::null_vector(sys, sol.zeta_root);
  sol.decay_ratio = sol.zeta_root;
  return sol;
}

// f(l) on all of Z from the source values:
//   f(l) = [beta f(0) zeta^|l| - b0 sum_k f(k) (zeta^{|k-|l||} + zeta^{k+|l|})] / r.
// Even in l by construction; geometric with ratio zeta beyond the sources.
inline double eigenfunction_extend(const SpectralSolution& sol, const ModelParams& p,
                                   long l) {
  const double z = sol.zeta_root;
  const long al = l < 0 ? -l : l;
  const double r = p.kappa * (1.0 - z * z) / (2.0 * z);
  double acc = p.beta() * sol.f_sources[0] * std::pow(z, static_cast<double>(al));
  for (int k = 1; k <= p.n; ++k) {
    acc -= p.b0 * sol.f_sources[static_cast<std::size_t>(k)] *
           (std::pow(z, static_cast<double>(std::abs(al - k))) +
            std::pow(z, static_cast<double>(al + k)));
  }
  return acc / r;
}

// Pointwise defect (H_n f - lambda f)(x) of the extended eigenfunction.
inline double hn_residual(const SpectralSolution& sol, const ModelParams& p, long x) {
  const double fx = eigenfunction_extend(sol, p, x);
  double v = 0.5 * p.kappa *
                 (eigenfunction_extend(sol, p, x - 1) + eigenfunction_extend(sol, p, x + 1)) -
             p.kappa * fx;
  if (x == 0) v += p.beta() * sol.f_sources[0];
  if (x != 0 && std::abs(x) <= p.n) v -= p.b0 * fx;
  return v - sol.lambda * fx;
}

}  // namespace brw
