// Test-only reference oracles: brute-force grid maximizers and exhaustive
// enumerations, independent of the library's solve paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "subsel/index_set.hpp"
#include "subsel/oracle.hpp"

namespace testutil {

/// Maximizes fn over a dim-dimensional cube by iterated grid refinement:
/// each stage scans points_per_axis^dim points, then recenters on the argmax
/// with the range shrunk to twice the previous grid step.
inline double grid_maximize(const std::function<double(const Eigen::VectorXd&)>& fn,
                            int dim, double half_width, int stages = 7,
                            int points_per_axis = 21) {
  Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
  double width = half_width;
  double best = fn(center);
  for (int stage = 0; stage < stages; ++stage) {
    const double step = 2.0 * width / (points_per_axis - 1);
    Eigen::VectorXd best_point = center;
    std::vector<int> ticks(dim, 0);
    Eigen::VectorXd point(dim);
    const std::int64_t total = static_cast<std::int64_t>(
        std::pow(static_cast<double>(points_per_axis), dim));
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      for (int a = 0; a < dim; ++a) {
        const int t = static_cast<int>(rem % points_per_axis);
        rem /= points_per_axis;
        point[a] = center[a] - width + t * step;
      }
      const double v = fn(point);
      if (v > best) {
        best = v;
        best_point = point;
      }
    }
    center = best_point;
    width = 2.0 * step;
  }
  return best;
}

/// Visits every size-`size` subset of the pool.
inline void for_each_subset(const subsel::IndexSet& pool, std::size_t size,
                            const std::function<void(const subsel::IndexSet&)>& visit) {
  const std::size_t n = pool.size();
  if (size > n) return;
  if (size == 0) {
    visit(subsel::IndexSet{});
    return;
  }
  std::vector<std::size_t> comb(size);
  for (std::size_t i = 0; i < size; ++i) comb[i] = i;
  for (;;) {
    std::vector<std::size_t> members(size);
    for (std::size_t i = 0; i < size; ++i) members[i] = pool[comb[i]];
    visit(subsel::IndexSet(std::move(members)));
    std::size_t i = size;
    bool done = true;
    while (i > 0) {
      --i;
      if (comb[i] != i + n - size) {
        done = false;
        break;
      }
    }
    if (done) return;
    ++comb[i];
    for (std::size_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
  }
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Exact mean and standard deviation of f_S(R) over all size-`size` subsets
/// R of the pool.
inline MeanSd exact_set_marginal_distribution(const subsel::SetFunctionOracle& oracle,
                                              const subsel::IndexSet& s,
                                              const subsel::IndexSet& pool,
                                              std::size_t size) {
  const double base = oracle.eval(s);
  double sum = 0.0, sumsq = 0.0;
  std::size_t count = 0;
  for_each_subset(pool, size, [&](const subsel::IndexSet& r) {
    const double v = oracle.eval(s.unioned(r)) - base;
    sum += v;
    sumsq += v * v;
    ++count;
  });
  MeanSd out;
  out.mean = sum / static_cast<double>(count);
  out.sd = std::sqrt(std::max(0.0, sumsq / static_cast<double>(count) -
                                       out.mean * out.mean));
  return out;
}

/// Exact E_R[f_{S u (R \ {a})}(a)] over all size-`size` subsets R of the pool.
inline double exact_element_marginal(const subsel::SetFunctionOracle& oracle,
                                     const subsel::IndexSet& s,
                                     const subsel::IndexSet& pool,
                                     std::size_t size, std::size_t a) {
  double sum = 0.0;
  std::size_t count = 0;
  for_each_subset(pool, size, [&](const subsel::IndexSet& r) {
    const subsel::IndexSet context = s.unioned(r.without(a));
    sum += oracle.eval(context.with(a)) - oracle.eval(context);
    ++count;
  });
  return sum / static_cast<double>(count);
}

/// Exhaustive diminishing-returns check: f_S(a) >= f_T(a) for all S subset T
/// and a outside T. Requires n <= 16. Returns the number of violations.
inline std::size_t count_dr_violations(const subsel::SetFunctionOracle& oracle,
                                       double tol = 1e-12) {
  const std::size_t n = oracle.ground_size();
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    table[mask] = oracle.eval(subsel::IndexSet::from_mask(mask));
  }
  std::size_t violations = 0;
  const std::uint64_t all = table.size() - 1;
  for (std::uint64_t t = 0; t <= all; ++t) {
    // Enumerate S as submasks of T.
    std::uint64_t s = t;
    for (;;) {
      for (std::uint64_t bits = all & ~t; bits != 0; bits &= bits - 1) {
        const std::uint64_t a = bits & (~bits + 1);
        const double gain_s = table[s | a] - table[s];
        const double gain_t = table[t | a] - table[t];
        if (gain_s < gain_t - tol) ++violations;
      }
      if (s == 0) break;
      s = (s - 1) & t;
    }
  }
  return violations;
}

}  // namespace testutil
