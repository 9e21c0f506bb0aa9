#pragma once

// Model of the branching random walk on Z: a simple symmetric walk with
// jump intensity kappa, one reproducing site at the origin whose branching
// law is f(u) = sum_k b_k u^k, and 2n absorbing sites at +-1..+-n with
// death intensity b0. The evolution operator of the first moments is
//
//   H_n = kappa*Delta + beta*Delta_0 - b0 * sum_{k=1..n} (Delta_k + Delta_{-k}),
//
// restricted here to a finite window with zero (Dirichlet) boundary; its
// top eigenpair is the brute-force oracle for all closed forms.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "brw/errors.hpp"

namespace brw {

// One term of the branching law: intensity `rate` for the event replacing a
// particle by `count` particles (count != 1; the k = 1 intensity is implied).
struct OffspringTerm {
  int count = 0;
  double rate = 0.0;
};

struct OffspringLaw {
  std::vector<OffspringTerm> rates;  // k != 1 terms, merged, ascending count
  double b1 = 0.0;                   // implied: -(sum of all other rates)
  double beta = 0.0;                 // f'(1) = sum k b_k
  double beta_star = 0.0;            // sum_{k>1} (k-1) b_k
  double death_rate = 0.0;           // the k = 0 intensity (0 if absent)
  // Declared, not verified: the higher-moment growth bound required by the
  // exponential-growth limit theorem. Finite-support laws always satisfy it.
  bool moment_growth_assumed = true;

  // Total per-particle intensity of law events (reproduction + death).
  double event_rate() const { return -b1; }

  // Degenerate law with no branching events at all; useful for pure-walk
  // runs. Not constructible through build_offspring_law, which requires a
  // reproduction term.
  static OffspringLaw no_branching() { return {}; }
};

inline OffspringLaw build_offspring_law(std::vector<OffspringTerm> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const OffspringTerm& a, const OffspringTerm& b) { return a.count < b.count; });
  OffspringLaw law;
  for (const auto& term : pairs) {
    if (term.count < 0)
      throw validation_error("offspring law: negative offspring count");
    if (term.count == 1)
      throw validation_error("offspring law: k = 1 is not an event; its intensity is implied");
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate))
      throw validation_error("offspring law: intensities must be finite and nonnegative");
    if (term.rate == 0.0) continue;
    if (!law.rates.empty() && law.rates.back().count == term.count)
      law.rates.back().rate += term.rate;
    else
      law.rates.push_back(term);
  }
  double total = 0.0;
  for (const auto& term : law.rates) {
    total += term.rate;
    if (term.count == 0)
      law.death_rate += term.rate;
    else
      law.beta_star += (term.count - 1) * term.rate;
  }
  if (!(law.beta_star > 0.0))
    throw validation_error("offspring law: no reproduction term (beta* must be positive)");
  law.b1 = -total;
  // beta = sum_k k b_k with b1 included collapses to beta* - b_0.
  law.beta = law.beta_star - law.death_rate;
  return law;
}

inline OffspringLaw binary_splitting(double rate) {
  return build_offspring_law({{2, rate}});
}

struct ModelParams {
  double kappa = 1.0;  // walk intensity
  double b0 = 1.0;     // absorber death intensity
  int n = 1;           // absorber pairs at +-1..+-n
  OffspringLaw offspring;

  double beta() const { return offspring.beta; }
};

inline ModelParams make_params(double kappa, double b0, int n, OffspringLaw law) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw validation_error("model: kappa must be positive");
  if (n < 0) throw validation_error("model: n must be nonnegative");
  if (!(b0 >= 0.0) || !std::isfinite(b0))
    throw validation_error("model: b0 must be finite and nonnegative");
  if (n >= 1 && !(b0 > 0.0))
    throw validation_error("model: absorbers present (n >= 1) require b0 > 0");
  return ModelParams{kappa, b0, n, std::move(law)};
}

// Params whose operator has source intensity `beta`, for computations that
// only see H_n. The law is a binary split plus enough death at the origin
// to realize any real beta with beta* > 0.
inline ModelParams make_params_with_beta(double kappa, double b0, int n, double beta) {
  const double death = std::max(b0, 1.0 - beta);
  OffspringLaw law = build_offspring_law({{0, death}, {2, beta + death}});
  return make_params(kappa, b0, n, std::move(law));
}

// H_n restricted to [-L, L] with Dirichlet boundary: symmetric tridiagonal,
// diag(x) = -kappa + beta*[x=0] - b0*[1 <= |x| <= n], off-diagonal kappa/2.
struct TruncatedOperator {
  int window_halfwidth = 0;      // L
  std::vector<double> diagonal;  // 2L+1 entries, site x stored at index x+L
  double offdiagonal = 0.0;      // kappa/2

  int size() const { return 2 * window_halfwidth + 1; }
};

inline TruncatedOperator build_truncated_operator(const ModelParams& p, int L) {
  if (L <= p.n)
    throw validation_error("truncated operator: window halfwidth L must exceed n");
  TruncatedOperator op;
  op.window_halfwidth = L;
  op.offdiagonal = 0.5 * p.kappa;
  op.diagonal.assign(static_cast<std::size_t>(2 * L + 1), -p.kappa);
  op.diagonal[static_cast<std::size_t>(L)] += p.beta();
  for (int k = 1; k <= p.n; ++k) {
    op.diagonal[static_cast<std::size_t>(L + k)] -= p.b0;
    op.diagonal[static_cast<std::size_t>(L - k)] -= p.b0;
  }
  return op;
}

// y = H x.
inline void apply_operator(const TruncatedOperator& op, std::span<const double> x,
                           std::span<double> y) {
  const int m = op.size();
  const double e = op.offdiagonal;
  for (int i = 0; i < m; ++i) {
    double v = op.diagonal[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (i > 0) v += e * x[static_cast<std::size_t>(i - 1)];
    if (i + 1 < m) v += e * x[static_cast<std::size_t>(i + 1)];
    y[static_cast<std::size_t>(i)] = v;
  }
}

}  // namespace brw
