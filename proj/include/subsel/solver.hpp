#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subsel/index_set.hpp"
#include "subsel/oracle.hpp"
#include "subsel/parallel.hpp"
#include "subsel/rng.hpp"
#include "subsel/selection.hpp"

namespace subsel {

/// Uniform size-subset of the pool, drawn without replacement via a seeded
/// Fisher-Yates prefix. Deterministic given the generator state.
inline IndexSet sample_uniform_subset(const IndexSet& pool, std::size_t size,
                                      Rng& rng) {
  if (size > pool.size()) {
    throw std::invalid_argument(
        "sample_uniform_subset: size exceeds pool; clamp first");
  }
  std::vector<std::size_t> scratch = pool.indices();
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_index(scratch.size() - i));
    std::swap(scratch[i], scratch[j]);
  }
  scratch.resize(size);
  return IndexSet::from_unsorted(std::move(scratch));
}

/// Sample-average estimate of E_{R ~ U(pool, size)}[ f_S(R) ] over m fresh
/// independent draws, summed in draw order. One adaptive round: all queries
/// depend only on S and the pool, so they may be evaluated concurrently.
inline double estimate_set_marginal(const SetFunctionOracle& oracle,
                                    const IndexSet& s, const IndexSet& pool,
                                    std::size_t size, std::size_t m, Rng& rng,
                                    std::size_t workers = 1,
                                    bool own_round = true) {
  size = std::min(size, pool.size());
  std::vector<IndexSet> unions;
  unions.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    unions.push_back(s.unioned(sample_uniform_subset(pool, size, rng)));
  }
  std::vector<double> values;
  parallel_map(m, workers, values,
               [&](std::size_t i) { return oracle.eval(unions[i]); });
  const double base = oracle.eval(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += values[i] - base;
  if (own_round) oracle.note_round();
  return sum / static_cast<double>(m);
}

/// Per-element estimates of E_{R ~ U(pool, size)}[ f_{S u (R \ {a})}(a) ] for
/// every a in the pool, reusing one shared batch of m draws across all
/// elements. All evaluations are mutually independent: a single adaptive
/// round, m * (|pool| + 1) queries. With size = 0 the estimate degenerates to
/// the plain singleton marginal f_S(a), computed in one |pool| + 1 query
/// batch.
inline std::vector<double> estimate_element_marginals(
    const SetFunctionOracle& oracle, const IndexSet& s, const IndexSet& pool,
    std::size_t size, std::size_t m, Rng& rng, std::size_t workers = 1,
    bool own_round = true) {
  size = std::min(size, pool.size());
  const std::size_t p = pool.size();
  std::vector<double> estimates(p, 0.0);
  if (p == 0) {
    if (own_round) oracle.note_round();
    return estimates;
  }

  if (size == 0) {
    std::vector<double> singles;
    parallel_map(p, workers, singles, [&](std::size_t i) {
      return oracle.eval(s.with(pool[i]));
    });
    const double base = oracle.eval(s);
    for (std::size_t i = 0; i < p; ++i) estimates[i] = singles[i] - base;
    if (own_round) oracle.note_round();
    return estimates;
  }

  std::vector<IndexSet> draws;
  draws.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    draws.push_back(sample_uniform_subset(pool, size, rng));
  }

  // Task layout: per draw, one base query f(S u R_i) followed by one query
  // per element (f(S u R_i \ {a}) if a in R_i, f(S u R_i u {a}) otherwise).
  const std::size_t per_draw = p + 1;
  std::vector<IndexSet> tasks(m * per_draw);
  for (std::size_t i = 0; i < m; ++i) {
    const IndexSet with_r = s.unioned(draws[i]);
    tasks[i * per_draw] = with_r;
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t a = pool[j];
      tasks[i * per_draw + 1 + j] =
          draws[i].contains(a) ? with_r.without(a) : with_r.with(a);
    }
  }
  std::vector<double> values;
  parallel_map(tasks.size(), workers, values,
               [&](std::size_t t) { return oracle.eval(tasks[t]); });

  for (std::size_t i = 0; i < m; ++i) {
    const double base = values[i * per_draw];
    for (std::size_t j = 0; j < p; ++j) {
      const double other = values[i * per_draw + 1 + j];
      const double contribution =
          draws[i].contains(pool[j]) ? base - other : other - base;
      estimates[j] += contribution;
    }
  }
  for (double& e : estimates) e /= static_cast<double>(m);
  if (own_round) oracle.note_round();
  return estimates;
}

/// Geometric grid of candidate optima (1+eps)^i * max_a f(a) for
/// i = 1..ceil(ln(n)/eps). Evaluates all singletons in one adaptive round;
/// returns {0} when every singleton is worthless.
inline std::vector<double> opt_grid(const SetFunctionOracle& oracle,
                                    double epsilon, double n_hint = 0.0) {
  const std::size_t n = oracle.ground_size();
  if (!(epsilon > 0.0)) throw ConfigError("opt_grid requires epsilon > 0");
  std::vector<double> singles(n);
  for (std::size_t a = 0; a < n; ++a) singles[a] = oracle.eval(IndexSet{a});
  oracle.note_round();
  const double best = *std::max_element(singles.begin(), singles.end());
  if (!(best > 0.0)) return {0.0};
  const double count_hint = n_hint > 0.0 ? n_hint : static_cast<double>(n);
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::log(count_hint) / epsilon)));
  std::vector<double> grid(count);
  double g = best;
  for (std::size_t i = 0; i < count; ++i) {
    g *= 1.0 + epsilon;
    grid[i] = g;
  }
  return grid;
}

/// Candidate differential-submodularity parameters: the geometric grid
/// mirrored into (0, 1], descending from the endpoint 1.
inline std::vector<double> alpha_grid(double epsilon, double n_hint) {
  if (!(epsilon > 0.0)) throw ConfigError("alpha_grid requires epsilon > 0");
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::log(n_hint) / epsilon)));
  std::vector<double> grid;
  grid.reserve(count + 1);
  grid.push_back(1.0);
  double g = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    g /= 1.0 + epsilon;
    grid.push_back(g);
  }
  return grid;
}

namespace detail {

inline std::size_t ceil_div(std::size_t a, std::size_t b) {
  return (a + b - 1) / b;
}

/// Core adaptive-sampling loop. Per outer iteration the pool resets to the
/// unselected elements and the threshold t = (1-eps)(opt - f(S)) is fixed.
/// Each while-iteration is a single adaptive round: the set estimate and the
/// element filter estimates depend only on (S, X) and could be issued as one
/// batch; the element batch is evaluated lazily only when the set estimate
/// misses the acceptance threshold. Elements are filtered on their singleton
/// marginals f_S(a) (the shared-draw estimator with draw size 0), which keeps
/// every query within |S| + |R| <= k elements and so stays inside the domain
/// of capped oracles. After filter_cap failed iterations the fallback adds
/// the best of m freshly sampled candidate sets.
inline SelectionResult dash_impl(const SetFunctionOracle& oracle,
                                 const DashParams& params, double opt_value,
                                 double alpha, std::size_t workers,
                                 bool allow_zero_epsilon) {
  params.validate(allow_zero_epsilon);
  if (!(opt_value > 0.0)) {
    throw ConfigError("dash requires a positive opt_value");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("dash requires alpha in (0,1]");
  }
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = oracle.ground_size();
  const std::size_t k = std::min(params.k, n);
  const std::size_t cap = params.resolved_filter_cap(n);
  const double eps = params.epsilon;

  Rng rng(params.seed);
  SelectionResult result;
  result.params_echo = params;
  result.params_echo.alpha = alpha;
  result.params_echo.opt_guess = opt_value;

  IndexSet selected;
  double value = 0.0;  // oracles are normalized: f(empty) = 0
  const std::uint64_t q0 = oracle.queries();
  std::uint64_t q_mark = q0;
  RunTrace& trace = result.trace;

  const auto push_round = [&](RoundRecord rec) {
    rec.round = trace.rounds.size() + 1;
    const std::uint64_t q_now = oracle.queries();
    rec.queries = q_now - q_mark;
    q_mark = q_now;
    trace.rounds.push_back(std::move(rec));
    oracle.note_round();
  };

  bool done = k == 0;
  for (std::size_t outer = 1; !done && outer <= params.r; ++outer) {
    if (selected.size() >= k) break;
    IndexSet pool = IndexSet::full(n).minus(selected);
    if (pool.empty()) break;
    const double t = std::max(0.0, (1.0 - eps) * (opt_value - value));
    if (t <= 0.0) break;  // this guess is already beaten
    const double add_threshold = alpha * alpha * t / static_cast<double>(params.r);
    const double filter_threshold =
        alpha * (1.0 + eps / 2.0) * t / static_cast<double>(k);

    for (std::size_t filter_iters = 0;; ++filter_iters) {
      const std::size_t size =
          std::min({ceil_div(k, params.r), k - selected.size(), pool.size()});
      const double estimate = estimate_set_marginal(
          oracle, selected, pool, size, params.samples_m, rng, workers,
          /*own_round=*/false);

      if (estimate >= add_threshold) {
        push_round({.outer = outer,
                    .phase = "accept",
                    .pool_size = pool.size(),
                    .value = value,
                    .set_estimate = estimate,
                    .threshold_t = t,
                    .add_threshold = add_threshold,
                    .filter_threshold = filter_threshold});
        const IndexSet r = sample_uniform_subset(pool, size, rng);
        selected = selected.unioned(r);
        value = oracle.eval(selected);
        push_round({.outer = outer,
                    .phase = "add",
                    .pool_size = pool.size(),
                    .value = value,
                    .threshold_t = t});
        break;
      }

      if (filter_iters >= cap) {
        // Fallback: the acceptance threshold is unreachable for this guess;
        // add the best of m freshly sampled candidate sets.
        std::vector<IndexSet> candidates;
        candidates.reserve(params.samples_m);
        for (std::size_t i = 0; i < params.samples_m; ++i) {
          candidates.push_back(
              selected.unioned(sample_uniform_subset(pool, size, rng)));
        }
        std::vector<double> cand_values;
        parallel_map(candidates.size(), workers, cand_values,
                     [&](std::size_t i) { return oracle.eval(candidates[i]); });
        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i) {
          if (cand_values[i] > cand_values[best] ||
              (cand_values[i] == cand_values[best] &&
               candidates[i] < candidates[best])) {
            best = i;
          }
        }
        selected = candidates[best];
        value = cand_values[best];
        push_round({.outer = outer,
                    .phase = "fallback",
                    .pool_size = pool.size(),
                    .value = value,
                    .set_estimate = estimate,
                    .threshold_t = t,
                    .add_threshold = add_threshold,
                    .filter_threshold = filter_threshold,
                    .fallback = true});
        break;
      }

      const std::vector<double> marginals = estimate_element_marginals(
          oracle, selected, pool, /*size=*/0, params.samples_m, rng, workers,
          /*own_round=*/false);
      std::vector<std::size_t> survivors;
      survivors.reserve(pool.size());
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (marginals[j] >= filter_threshold) survivors.push_back(pool[j]);
      }
      pool = IndexSet(std::move(survivors));
      push_round({.outer = outer,
                  .phase = "filter",
                  .pool_size = pool.size(),
                  .value = value,
                  .set_estimate = estimate,
                  .threshold_t = t,
                  .add_threshold = add_threshold,
                  .filter_threshold = filter_threshold});
      if (pool.empty()) {
        done = true;
        break;
      }
    }
  }

  result.value = oracle.eval(selected);
  push_round({.phase = "final",
              .pool_size = n - selected.size(),
              .value = result.value});
  result.selected = std::move(selected);
  trace.adaptive_rounds = trace.rounds.size();
  trace.total_queries = oracle.queries() - q0;
  trace.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_start)
          .count();
  return result;
}

}  // namespace detail

/// Adaptive-sampling maximization under a cardinality constraint with a known
/// optimum guess and differential-submodularity parameter. Runs
/// params.r outer iterations, each accepting one uniformly drawn surviving
/// set of ~k/r elements once the estimated expected marginal clears
/// alpha^2 t / r; never diverges (filter_cap bounds each outer round).
inline SelectionResult dash(const SetFunctionOracle& oracle,
                            const DashParams& params, double opt_value,
                            double alpha, std::size_t workers = 1) {
  return detail::dash_impl(oracle, params, opt_value, alpha, workers,
                           /*allow_zero_epsilon=*/false);
}

/// Runs dash for every (opt guess, alpha guess) pair from the geometric grids
/// (or the degenerate single pair when both are pinned in params) and keeps
/// the best re-evaluated result; ties break toward the lexicographically
/// smaller selected set.
inline SelectionResult dash_with_guessing(const SetFunctionOracle& oracle,
                                          const DashParams& params,
                                          std::size_t workers = 1) {
  params.validate();
  if (params.opt_guess && params.alpha) {
    return dash(oracle, params, *params.opt_guess, *params.alpha, workers);
  }
  const double n_hint = static_cast<double>(oracle.ground_size());
  std::vector<double> opts;
  if (params.opt_guess) {
    opts = {*params.opt_guess};
  } else {
    opts = opt_grid(oracle, params.epsilon, n_hint);
  }
  std::vector<double> alphas;
  if (params.alpha) {
    alphas = {*params.alpha};
  } else {
    alphas = alpha_grid(params.epsilon, n_hint);
  }

  std::optional<SelectionResult> best;
  std::uint64_t ordinal = 0;
  for (double opt : opts) {
    for (double a : alphas) {
      DashParams run = params;
      run.seed = Rng::derive_seed(params.seed, ordinal++);
      if (!(opt > 0.0)) continue;  // degenerate guess of a zero function
      SelectionResult candidate = dash(oracle, run, opt, a, workers);
      if (!best || candidate.value > best->value ||
          (candidate.value == best->value &&
           candidate.selected < best->selected)) {
        best = std::move(candidate);
      }
    }
  }
  if (!best) {
    // Every guess was degenerate: the function is identically worthless on
    // singletons; return the empty selection.
    SelectionResult empty;
    empty.params_echo = params;
    empty.value = oracle.eval(empty.selected);
    oracle.note_round();
    empty.trace.adaptive_rounds = 1;
    empty.trace.total_queries = 1;
    empty.trace.rounds.push_back(
        {.round = 1, .phase = "final", .pool_size = oracle.ground_size(),
         .value = empty.value, .queries = 1});
    return empty;
  }
  return *best;
}

}  // namespace subsel
