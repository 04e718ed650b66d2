#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

#include "subsel/index_set.hpp"

namespace subsel {

/// A black-box monotone set function f : 2^[n] -> R with query accounting.
///
/// eval() is pure and safe to call concurrently from any number of workers.
/// The query counter counts every eval; the round counter counts adaptive
/// rounds, i.e. batches of mutually independent queries, and is advanced
/// explicitly by the algorithm driving the oracle (note_round). Copies of an
/// oracle share the same counters.
class SetFunctionOracle {
 public:
  using EvalFn = std::function<double(const IndexSet&)>;

  SetFunctionOracle(std::size_t ground_size, EvalFn fn)
      : n_(ground_size),
        fn_(std::move(fn)),
        counters_(std::make_shared<Counters>()) {}

  std::size_t ground_size() const { return n_; }

  double eval(const IndexSet& s) const {
    counters_->queries.fetch_add(1, std::memory_order_relaxed);
    return fn_(s);
  }

  std::uint64_t queries() const {
    return counters_->queries.load(std::memory_order_relaxed);
  }
  std::uint64_t rounds() const {
    return counters_->rounds.load(std::memory_order_relaxed);
  }

  void note_round(std::uint64_t k = 1) const {
    counters_->rounds.fetch_add(k, std::memory_order_relaxed);
  }

  void reset_counters() const {
    counters_->queries.store(0, std::memory_order_relaxed);
    counters_->rounds.store(0, std::memory_order_relaxed);
  }

 private:
  struct Counters {
    std::atomic<std::uint64_t> queries{0};
    std::atomic<std::uint64_t> rounds{0};
  };

  std::size_t n_;
  EvalFn fn_;
  std::shared_ptr<Counters> counters_;
};

/// Marginal contribution f(S u A) - f(S), exactly two eval calls. Overlap
/// between S and A is absorbed by the union.
inline double marginal(const SetFunctionOracle& oracle, const IndexSet& s,
                       const IndexSet& a) {
  const double with = oracle.eval(s.unioned(a));
  const double base = oracle.eval(s);
  return with - base;
}

}  // namespace subsel
