#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "subsel/dataset.hpp"
#include "subsel/errors.hpp"
#include "subsel/index_set.hpp"
#include "subsel/objectives.hpp"
#include "subsel/oracle.hpp"
#include "subsel/rng.hpp"
#include "subsel/selection.hpp"
#include "subsel/solver.hpp"

namespace subsel {

/// Eigenvalue certificate for a dataset's standardized feature covariance:
/// gamma = lambda_min / lambda_max lower-bounds the submodularity ratio of
/// the variance-reduction objective and alpha = gamma^2 its differential
/// submodularity. Computed from the full n x n covariance, which is a valid
/// (loose) relaxation of any sparse restriction.
struct SpectralBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double m = 0.0;      // restricted strong concavity surrogate
  double M = 0.0;      // restricted smoothness surrogate
  double gamma = 0.0;  // m / M
  double alpha = 0.0;  // gamma^2
};

/// Empirically measured submodularity / differential-submodularity ratios
/// with the witnessing (S, A) pairs.
struct RatioReport {
  double gamma_hat = std::numeric_limits<double>::infinity();
  double alpha_hat = 1.0;
  IndexSet gamma_witness_s, gamma_witness_a;
  IndexSet alpha_witness_s, alpha_witness_a;
  std::size_t samples_used = 0;
};

struct SandwichReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double gamma = 0.0;
  double tolerance = 1e-8;
};

struct StallReport {
  bool stalled = false;
  double value = 0.0;
  IndexSet selected;
  std::size_t fallback_rounds = 0;
  SelectionResult run;
};

namespace detail {

inline double binomial_guard(std::size_t n, std::size_t k) {
  double c = 1.0;
  k = std::min(k, n - std::min(n, k));
  for (std::size_t i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 1e12) return c;
  }
  return c;
}

/// Visits every size-`size` subset of [0, n) in lexicographic order.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t size, Visit&& visit) {
  if (size > n) return;
  std::vector<std::size_t> comb(size);
  for (std::size_t i = 0; i < size; ++i) comb[i] = i;
  for (;;) {
    visit(comb);
    // advance
    std::size_t i = size;
    while (i > 0) {
      --i;
      if (comb[i] != i + n - size) break;
      if (i == 0) return;
    }
    if (comb[i] == i + n - size) return;
    ++comb[i];
    for (std::size_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
  }
}

}  // namespace detail

/// Exhaustive maximum of the oracle over all subsets of size <= k. Refuses
/// instances with C(n, k) > 1e6. Ties go to the lexicographically smallest
/// set; all evaluations are mutually independent (one adaptive round).
inline std::pair<IndexSet, double> brute_force_opt(
    const SetFunctionOracle& oracle, std::size_t k) {
  const std::size_t n = oracle.ground_size();
  k = std::min(k, n);
  if (detail::binomial_guard(n, k) > 1e6) {
    throw GuardError("brute_force_opt: C(n,k) exceeds the 1e6 guard");
  }
  IndexSet best_set;
  double best = oracle.eval(best_set);
  for (std::size_t size = 1; size <= k; ++size) {
    detail::for_each_combination(n, size, [&](const std::vector<std::size_t>& comb) {
      IndexSet s(comb);
      const double v = oracle.eval(s);
      if (v > best || (v == best && s < best_set)) {
        best = v;
        best_set = std::move(s);
      }
    });
  }
  oracle.note_round();
  return {best_set, best};
}

/// Exact submodularity ratio min over all S and all A (|A| <= k_max, A
/// disjoint from S) of sum_a f_S(a) / f_S(A), by full enumeration; also
/// tracks the two-sided ratio min(r, 1/r) as alpha_hat. Pairs whose
/// denominator vanishes are skipped. Guarded to n <= 12.
inline RatioReport submodularity_ratio(const SetFunctionOracle& oracle,
                                       std::size_t k_max,
                                       double zero_tol = 1e-12) {
  const std::size_t n = oracle.ground_size();
  if (n > 12) {
    throw GuardError("submodularity_ratio: exhaustive enumeration needs n <= 12");
  }
  k_max = std::min(k_max, n);

  // Memoize f over all subsets once.
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    table[mask] = oracle.eval(IndexSet::from_mask(mask));
  }
  oracle.note_round();

  RatioReport report;
  report.samples_used = 0;
  double best_gamma = std::numeric_limits<double>::infinity();
  double best_alpha = std::numeric_limits<double>::infinity();

  for (std::uint64_t s_mask = 0; s_mask < table.size(); ++s_mask) {
    const double f_s = table[s_mask];
    const std::uint64_t complement = (table.size() - 1) & ~s_mask;
    // Enumerate nonempty A subsets of the complement with |A| <= k_max.
    for (std::uint64_t a_mask = complement; a_mask != 0;
         a_mask = (a_mask - 1) & complement) {
      if (static_cast<std::size_t>(__builtin_popcountll(a_mask)) > k_max) {
        continue;
      }
      const double denom = table[s_mask | a_mask] - f_s;
      double num = 0.0;
      for (std::uint64_t bits = a_mask; bits != 0; bits &= bits - 1) {
        const std::uint64_t one = bits & (~bits + 1);
        num += table[s_mask | one] - f_s;
      }
      ++report.samples_used;
      if (denom <= zero_tol) continue;  // vacuous or unbounded direction
      num = std::max(num, 0.0);
      const double gamma = num / denom;
      if (gamma < best_gamma) {
        best_gamma = gamma;
        report.gamma_witness_s = IndexSet::from_mask(s_mask);
        report.gamma_witness_a = IndexSet::from_mask(a_mask);
      }
      const double alpha =
          num <= zero_tol ? 0.0 : std::min(gamma, denom / num);
      if (alpha < best_alpha) {
        best_alpha = alpha;
        report.alpha_witness_s = IndexSet::from_mask(s_mask);
        report.alpha_witness_a = IndexSet::from_mask(a_mask);
      }
    }
  }
  if (std::isfinite(best_gamma)) report.gamma_hat = best_gamma;
  report.alpha_hat = std::isfinite(best_alpha) ? std::min(best_alpha, 1.0) : 1.0;
  return report;
}

/// Samples (S, A) pairs and reports the worst observed two-sided ratio
/// between f_S(A) and the modular surrogate sum_a f_S(a). An empirical
/// lower-bound probe, not a certificate. max_union caps |S u A| so that
/// domain-restricted oracles stay queryable.
inline RatioReport diff_submodularity_witness(
    const SetFunctionOracle& oracle, std::size_t n_samples,
    std::size_t set_size, Rng& rng,
    std::size_t max_union = std::numeric_limits<std::size_t>::max(),
    double zero_tol = 1e-12) {
  if (n_samples < 1) throw ConfigError("diff_submodularity_witness: n_samples >= 1");
  const std::size_t n = oracle.ground_size();
  const IndexSet full = IndexSet::full(n);
  max_union = std::min(max_union, n);

  RatioReport report;
  report.samples_used = n_samples;
  double best_gamma = std::numeric_limits<double>::infinity();
  double best_alpha = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t a_size =
        1 + static_cast<std::size_t>(
                rng.next_index(std::min(set_size, max_union)));
    const IndexSet a = sample_uniform_subset(full, a_size, rng);
    const std::size_t s_limit =
        std::min({set_size, max_union - a_size, n - a_size});
    const std::size_t s_size =
        static_cast<std::size_t>(rng.next_index(s_limit + 1));
    const IndexSet s = sample_uniform_subset(full.minus(a), s_size, rng);

    const double f_s = oracle.eval(s);
    const double denom = oracle.eval(s.unioned(a)) - f_s;
    double num = 0.0;
    for (std::size_t e : a) num += oracle.eval(s.with(e)) - f_s;
    if (denom <= zero_tol) continue;
    num = std::max(num, 0.0);
    const double gamma = num / denom;
    if (gamma < best_gamma) {
      best_gamma = gamma;
      report.gamma_witness_s = s;
      report.gamma_witness_a = a;
    }
    const double alpha = num <= zero_tol ? 0.0 : std::min(gamma, denom / num);
    if (alpha < best_alpha) {
      best_alpha = alpha;
      report.alpha_witness_s = s;
      report.alpha_witness_a = a;
    }
  }
  oracle.note_round();
  if (std::isfinite(best_gamma)) report.gamma_hat = best_gamma;
  report.alpha_hat = std::isfinite(best_alpha) ? std::min(best_alpha, 1.0) : 1.0;
  return report;
}

/// Certified-but-loose spectral bounds from the full covariance of the (as
/// given, assumed standardized) features. lambda_min(full) <= lambda_min of
/// any principal submatrix and symmetrically for lambda_max, so gamma and
/// alpha = gamma^2 are valid for every sparsity level.
inline SpectralBounds spectral_gamma(const Dataset& data, std::size_t k,
                                     bool* standardized = nullptr) {
  (void)k;  // the certified path needs no sparsity level
  data.validate();
  const bool is_std = columns_standardized(data.features, 1e-6, 1e-6);
  if (standardized) *standardized = is_std;

  const double d = static_cast<double>(data.d());
  const Eigen::MatrixXd cov =
      data.features.transpose() * data.features / d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw DataError("spectral_gamma: eigenvalue computation failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-10 * std::max(1.0, std::abs(hi))) {
    throw DataError("spectral_gamma: covariance is not PSD within tolerance");
  }
  SpectralBounds out;
  out.lambda_min = std::max(lo, 0.0);
  out.lambda_max = hi;
  out.m = out.lambda_min;
  out.M = out.lambda_max;
  out.gamma = hi > 0.0 ? out.lambda_min / hi : 0.0;
  out.alpha = out.gamma * out.gamma;
  return out;
}

/// Uncertified refinement: extreme eigenvalues over randomly sampled
/// 2k-column principal submatrices. Tighter than the global bounds but only
/// valid for the sampled supports.
inline SpectralBounds spectral_gamma_sampled(const Dataset& data, std::size_t k,
                                             std::size_t trials, Rng& rng) {
  data.validate();
  const std::size_t n = data.n();
  const std::size_t sub = std::min(2 * k, n);
  const double d = static_cast<double>(data.d());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const IndexSet full = IndexSet::full(n);
  for (std::size_t t = 0; t < trials; ++t) {
    const IndexSet s = sample_uniform_subset(full, sub, rng);
    const Eigen::MatrixXd xs = data.columns(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        xs.transpose() * xs / d, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  SpectralBounds out;
  out.lambda_min = std::max(lo, 0.0);
  out.lambda_max = hi;
  out.m = out.lambda_min;
  out.M = out.lambda_max;
  out.gamma = hi > 0.0 ? out.lambda_min / hi : 0.0;
  out.alpha = out.gamma * out.gamma;
  return out;
}

/// Checks gamma * sum_a f_S(a) <= f_S(A) <= (1/gamma) * sum_a f_S(a) on
/// randomly sampled disjoint (S, A) pairs for the variance-reduction
/// objective, with gamma from spectral_gamma.
inline SandwichReport sandwich_check(const Dataset& data, std::size_t n_trials,
                                     Rng& rng, double tolerance = 1e-8) {
  data.validate();
  const SetFunctionOracle oracle = make_oracle(ObjectiveKind::kReg, data);
  const double gamma = spectral_gamma(data, 0).gamma;
  const std::size_t n = data.n();
  const IndexSet full = IndexSet::full(n);

  SandwichReport report;
  report.trials = n_trials;
  report.gamma = gamma;
  report.tolerance = tolerance;
  for (std::size_t t = 0; t < n_trials; ++t) {
    const std::size_t a_size =
        1 + static_cast<std::size_t>(rng.next_index(std::min<std::size_t>(4, n)));
    const IndexSet a = sample_uniform_subset(full, a_size, rng);
    const std::size_t s_size = static_cast<std::size_t>(
        rng.next_index(std::min<std::size_t>(4, n - a_size) + 1));
    const IndexSet s = sample_uniform_subset(full.minus(a), s_size, rng);

    const double f_s = oracle.eval(s);
    const double set_marginal = oracle.eval(s.unioned(a)) - f_s;
    double modular = 0.0;
    for (std::size_t e : a) modular += oracle.eval(s.with(e)) - f_s;

    if (gamma * modular > set_marginal + tolerance) ++report.violations;
    if (gamma > 1e-12 && set_marginal > modular / gamma + tolerance) {
      ++report.violations;
    }
  }
  return report;
}

/// Weakly submodular toy min{2 u(S) + 1, 2 v(S)} over a ground set of k
/// u-elements (indices 0..k-1) followed by k v-elements (indices k..2k-1).
inline SetFunctionOracle make_toy_weak(std::size_t k) {
  if (k < 1) throw ConfigError("make_toy_weak requires k >= 1");
  return SetFunctionOracle(2 * k, [k](const IndexSet& s) {
    std::size_t u = 0;
    for (std::size_t e : s) u += e < k ? 1 : 0;
    const std::size_t v = s.size() - u;
    return std::min(2.0 * static_cast<double>(u) + 1.0,
                    2.0 * static_cast<double>(v));
  });
}

/// The weak toy with k = 2, restricted to queries of at most two elements;
/// larger queries are rejected. Differentially submodular on its domain even
/// though the unrestricted toy is not.
inline SetFunctionOracle make_toy_capped() {
  return SetFunctionOracle(4, [](const IndexSet& s) {
    if (s.size() > 2) {
      throw DomainError("capped toy is defined only for |S| <= 2");
    }
    std::size_t u = 0;
    for (std::size_t e : s) u += e < 2 ? 1 : 0;
    const std::size_t v = s.size() - u;
    return std::min(2.0 * static_cast<double>(u) + 1.0,
                    2.0 * static_cast<double>(v));
  });
}

struct R2Counterexample {
  CovarianceModel model;
  Dataset dataset;
  SetFunctionOracle oracle;
};

/// The six-candidate goodness-of-fit instance in R^4 whose optimal 2-subsets
/// pair one basis vector with its sqrt(1/2)-mixed partner. Greedy solves it;
/// threshold-based set acceptance at alpha = 1 cannot.
inline R2Counterexample make_r2_counterexample() {
  const double h = std::sqrt(0.5);
  Eigen::MatrixXd x(4, 6);
  x.setZero();
  x(1, 0) = 1.0;                  // x1
  x(2, 1) = 1.0;                  // x2
  x(3, 2) = 1.0;                  // x3
  x(0, 3) = h; x(1, 3) = h;       // x4
  x(0, 4) = h; x(2, 4) = h;       // x5
  x(0, 5) = h; x(3, 5) = h;       // x6
  Eigen::VectorXd y(4);
  y << 1.0, 0.0, 0.0, 0.0;

  Dataset data{x, y, {"x1", "x2", "x3", "x4", "x5", "x6"}};
  CovarianceModel model{x.transpose() * y, x.transpose() * x};
  SetFunctionOracle oracle = make_oracle(model);
  return {std::move(model), std::move(data), std::move(oracle)};
}

/// Runs the adaptive-sampling solver (epsilon = 0 permitted here, exact OPT
/// supplied through params.opt_guess) and reports whether it could only make
/// progress through the filter-cap fallback, i.e. no sampled set ever passed
/// the acceptance threshold organically.
inline StallReport demonstrate_stall(const SetFunctionOracle& oracle,
                                     std::size_t k, DashParams params) {
  params.k = k;
  if (!params.opt_guess) {
    throw ConfigError("demonstrate_stall requires an explicit opt guess");
  }
  if (!params.filter_cap) params.filter_cap = 8;
  const double alpha = params.alpha.value_or(1.0);
  params.alpha = alpha;

  StallReport report;
  report.run = detail::dash_impl(oracle, params, *params.opt_guess, alpha,
                                 /*workers=*/1, /*allow_zero_epsilon=*/true);
  for (const RoundRecord& r : report.run.trace.rounds) {
    if (r.fallback) ++report.fallback_rounds;
  }
  report.stalled = report.fallback_rounds > 0;
  report.value = report.run.value;
  report.selected = report.run.selected;
  return report;
}

}  // namespace subsel
