#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "subsel/index_set.hpp"
#include "subsel/oracle.hpp"
#include "subsel/parallel.hpp"
#include "subsel/rng.hpp"
#include "subsel/selection.hpp"
#include "subsel/solver.hpp"

namespace subsel {

/// Reference selectors the adaptive-sampling solver is benchmarked against.
enum class BaselineKind { kGreedy, kGreedyParallel, kTopK, kRandom };

inline const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kGreedy: return "greedy";
    case BaselineKind::kGreedyParallel: return "greedy_parallel";
    case BaselineKind::kTopK: return "top_k";
    case BaselineKind::kRandom: return "random";
  }
  return "?";
}

namespace detail {

inline SelectionResult greedy_impl(const SetFunctionOracle& oracle,
                                   std::size_t k, std::size_t workers) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = oracle.ground_size();
  k = std::min(k, n);

  SelectionResult result;
  result.params_echo.k = k;
  IndexSet selected;
  double value = 0.0;
  const std::uint64_t q0 = oracle.queries();
  std::uint64_t q_mark = q0;

  for (std::size_t step = 1; step <= k; ++step) {
    const IndexSet pool = IndexSet::full(n).minus(selected);
    // One adaptive round: all candidate evaluations are independent; the
    // argmax reduction runs in index order so the pick is worker-invariant.
    std::vector<double> values;
    parallel_map(pool.size(), workers, values, [&](std::size_t j) {
      return oracle.eval(selected.with(pool[j]));
    });
    std::size_t best = 0;
    for (std::size_t j = 1; j < pool.size(); ++j) {
      if (values[j] > values[best]) best = j;
    }
    const double gain = values[best] - value;
    if (!(gain > 0.0)) break;  // no element adds value; stop early
    selected = selected.with(pool[best]);
    value = values[best];
    oracle.note_round();
    const std::uint64_t q_now = oracle.queries();
    result.trace.rounds.push_back({.round = result.trace.rounds.size() + 1,
                                   .outer = step,
                                   .phase = "greedy",
                                   .pool_size = pool.size() - 1,
                                   .value = value,
                                   .queries = q_now - q_mark});
    q_mark = q_now;
  }

  result.selected = selected;
  result.value = value;
  result.trace.adaptive_rounds = result.trace.rounds.size();
  result.trace.total_queries = oracle.queries() - q0;
  result.trace.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_start)
          .count();
  return result;
}

}  // namespace detail

/// Classic greedy: k rounds, each adding the element with the largest
/// marginal contribution, ties to the lowest index.
inline SelectionResult greedy_sds_ma(const SetFunctionOracle& oracle,
                                     std::size_t k) {
  return detail::greedy_impl(oracle, k, 1);
}

/// Greedy with the candidate queries of each round evaluated concurrently.
/// Selection is bit-identical to greedy_sds_ma for every worker count.
inline SelectionResult greedy_parallel(const SetFunctionOracle& oracle,
                                       std::size_t k, std::size_t workers) {
  return detail::greedy_impl(oracle, k, std::max<std::size_t>(1, workers));
}

/// Selects the k elements with the largest singleton values (one adaptive
/// round of n queries), ties to the lowest index.
inline SelectionResult top_k(const SetFunctionOracle& oracle, std::size_t k) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = oracle.ground_size();
  k = std::min(k, n);

  SelectionResult result;
  result.params_echo.k = k;
  const std::uint64_t q0 = oracle.queries();

  std::vector<double> singles(n);
  for (std::size_t a = 0; a < n; ++a) singles[a] = oracle.eval(IndexSet{a});
  oracle.note_round();
  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < n; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return singles[a] > singles[b];
  });
  order.resize(k);
  result.trace.rounds.push_back({.round = 1,
                                 .phase = "singletons",
                                 .pool_size = n,
                                 .value = 0.0,
                                 .queries = n});

  result.selected = IndexSet::from_unsorted(std::move(order));
  result.value = oracle.eval(result.selected);
  oracle.note_round();
  result.trace.rounds.push_back({.round = 2,
                                 .phase = "final",
                                 .pool_size = n - k,
                                 .value = result.value,
                                 .queries = 1});
  result.trace.adaptive_rounds = 2;
  result.trace.total_queries = oracle.queries() - q0;
  result.trace.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_start)
          .count();
  return result;
}

/// Uniformly random k-subset, evaluated once.
inline SelectionResult random_k(const SetFunctionOracle& oracle, std::size_t k,
                                Rng& rng) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = oracle.ground_size();
  k = std::min(k, n);

  SelectionResult result;
  result.params_echo.k = k;
  const std::uint64_t q0 = oracle.queries();
  result.selected = sample_uniform_subset(IndexSet::full(n), k, rng);
  result.value = oracle.eval(result.selected);
  oracle.note_round();
  result.trace.rounds.push_back({.round = 1,
                                 .phase = "final",
                                 .pool_size = n - k,
                                 .value = result.value,
                                 .queries = 1});
  result.trace.adaptive_rounds = 1;
  result.trace.total_queries = oracle.queries() - q0;
  result.trace.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_start)
          .count();
  return result;
}

}  // namespace subsel
