#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subsel/errors.hpp"
#include "subsel/index_set.hpp"

namespace subsel {

/// All knobs of the adaptive-sampling solver. alpha and opt_guess left unset
/// mean "guess over a geometric grid"; filter_cap left unset resolves to
/// ceil(log_{1+eps/2} n) + 2.
struct DashParams {
  std::size_t k = 0;
  std::size_t r = 1;
  double epsilon = 0.1;
  std::optional<double> alpha;
  std::size_t samples_m = 5;
  std::optional<double> opt_guess;
  std::optional<std::size_t> filter_cap;
  std::uint64_t seed = 0;

  void validate(bool allow_zero_epsilon = false) const {
    if (r < 1) throw ConfigError("r must be at least 1");
    const bool eps_ok = allow_zero_epsilon
                            ? (epsilon >= 0.0 && epsilon < 1.0)
                            : (epsilon > 0.0 && epsilon < 1.0);
    if (!eps_ok) throw ConfigError("epsilon must lie in (0,1)");
    if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) {
      throw ConfigError("alpha must lie in (0,1]");
    }
    if (samples_m < 1) throw ConfigError("samples_m must be at least 1");
    if (filter_cap && *filter_cap < 1) {
      throw ConfigError("filter_cap must be at least 1");
    }
  }

  std::size_t resolved_filter_cap(std::size_t n) const {
    if (filter_cap) return *filter_cap;
    if (!(epsilon > 0.0)) {
      throw ConfigError("epsilon = 0 requires an explicit filter_cap");
    }
    const double cap =
        std::ceil(std::log(static_cast<double>(std::max<std::size_t>(n, 2))) /
                  std::log1p(epsilon / 2.0));
    return static_cast<std::size_t>(cap) + 2;
  }
};

/// One adaptive round of a selection run.
struct RoundRecord {
  std::size_t round = 0;  // 1-based adaptive-round ordinal within the run
  std::size_t outer = 0;  // outer iteration (or greedy step) the round belongs to
  std::string phase;      // filter | accept | add | fallback | singletons | final | ...
  std::size_t pool_size = 0;  // |X| surviving after this round
  double value = 0.0;         // f(S) after this round
  double set_estimate = std::numeric_limits<double>::quiet_NaN();
  double threshold_t = std::numeric_limits<double>::quiet_NaN();
  double add_threshold = std::numeric_limits<double>::quiet_NaN();     // alpha^2 t / r
  double filter_threshold = std::numeric_limits<double>::quiet_NaN();  // alpha (1+eps/2) t / k
  std::uint64_t queries = 0;  // oracle queries issued during this round
  bool fallback = false;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;
  std::uint64_t total_queries = 0;
  std::size_t adaptive_rounds = 0;
  double wall_time_ms = 0.0;
};

/// A selected index set, its freshly evaluated objective value, the run's
/// telemetry, and the resolved parameters (with winning guesses when the
/// solver guessed).
struct SelectionResult {
  IndexSet selected;
  double value = 0.0;
  RunTrace trace;
  DashParams params_echo;
};

}  // namespace subsel
