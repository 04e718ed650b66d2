#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subsel/baselines.hpp"
#include "subsel/oracle.hpp"
#include "subsel/parallel.hpp"
#include "subsel/rng.hpp"
#include "subsel/selection.hpp"
#include "subsel/serialization.hpp"
#include "subsel/solver.hpp"

namespace subsel {

/// One benchmark request: which algorithms to run, at which budgets, with
/// which solver knobs.
struct ExperimentConfig {
  std::vector<std::string> algorithms;  // dash, greedy, greedy_parallel, top_k, random
  std::vector<std::size_t> ks;
  DashParams dash;
  std::size_t workers = 1;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  json echo;  // provenance recorded verbatim into reports

  void validate(std::size_t ground_size) const {
    if (algorithms.empty()) throw ConfigError("no algorithms configured");
    if (ks.empty()) throw ConfigError("no k configured");
    for (std::size_t k : ks) {
      if (k > ground_size) {
        throw ConfigError("k = " + std::to_string(k) +
                          " exceeds ground set size " +
                          std::to_string(ground_size));
      }
    }
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  }
};

struct AlgorithmRun {
  std::string algorithm;
  std::size_t k = 0;
  std::size_t repetition = 0;
  double value = 0.0;
  std::size_t adaptive_rounds = 0;
  std::uint64_t queries = 0;
  double wall_time_ms = 0.0;
  std::vector<std::pair<std::size_t, double>> value_by_round;
  IndexSet selected;
  std::string error;  // empty on success
};

struct Report {
  json config;
  std::size_t workers = 1;
  std::size_t cores = 1;
  std::uint64_t seed = 0;
  std::vector<AlgorithmRun> results;
};

namespace detail {

inline SelectionResult dispatch_algorithm(const SetFunctionOracle& oracle,
                                          const std::string& name,
                                          std::size_t k, const DashParams& base,
                                          std::uint64_t run_seed,
                                          std::size_t workers) {
  if (name == "dash") {
    DashParams p = base;
    p.k = k;
    p.seed = run_seed;
    return dash_with_guessing(oracle, p, workers);
  }
  if (name == "greedy") return greedy_sds_ma(oracle, k);
  if (name == "greedy_parallel") return greedy_parallel(oracle, k, workers);
  if (name == "top_k") return top_k(oracle, k);
  if (name == "random") {
    Rng rng(run_seed);
    return random_k(oracle, k, rng);
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

inline AlgorithmRun record_run(const SetFunctionOracle& oracle,
                               const std::string& name, std::size_t k,
                               std::size_t repetition, SelectionResult result) {
  AlgorithmRun run;
  run.algorithm = name;
  run.k = k;
  run.repetition = repetition;
  run.value = result.value;
  run.adaptive_rounds = result.trace.adaptive_rounds;
  run.queries = result.trace.total_queries;
  run.wall_time_ms = result.trace.wall_time_ms;
  for (const RoundRecord& r : result.trace.rounds) {
    run.value_by_round.emplace_back(r.round, r.value);
  }
  run.selected = std::move(result.selected);
  // Reports must re-validate: the stated value has to match a fresh oracle
  // evaluation of the stated set.
  const double fresh = oracle.eval(run.selected);
  if (std::abs(fresh - run.value) > 1e-12) {
    throw Error("reported value " + std::to_string(run.value) +
                " does not re-evaluate (" + std::to_string(fresh) + ")");
  }
  return run;
}

}  // namespace detail

/// Runs every configured algorithm once at a single budget and records the
/// objective value after every adaptive round. Per-algorithm failures are
/// recorded and do not abort the experiment.
inline Report run_accuracy_vs_rounds(const SetFunctionOracle& oracle,
                                     const ExperimentConfig& cfg) {
  cfg.validate(oracle.ground_size());
  if (cfg.ks.size() != 1) {
    throw ConfigError("accuracy-vs-rounds runs a single k");
  }
  Report report;
  report.config = cfg.echo;
  report.workers = cfg.workers;
  report.cores = hardware_workers();
  report.seed = cfg.seed;
  const std::size_t k = cfg.ks.front();
  std::uint64_t ordinal = 0;
  for (const std::string& name : cfg.algorithms) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      const std::uint64_t run_seed = Rng::derive_seed(cfg.seed, ordinal++);
      try {
        report.results.push_back(detail::record_run(
            oracle, name, k, rep,
            detail::dispatch_algorithm(oracle, name, k, cfg.dash, run_seed,
                                       cfg.workers)));
      } catch (const std::exception& e) {
        AlgorithmRun failed;
        failed.algorithm = name;
        failed.k = k;
        failed.repetition = rep;
        failed.error = e.what();
        report.results.push_back(std::move(failed));
      }
    }
  }
  return report;
}

/// Runs every configured algorithm independently for each budget in the
/// sweep and records terminal value, adaptive rounds and wall time. Values
/// need not be monotone in k for randomized algorithms.
inline Report run_accuracy_time_vs_k(const SetFunctionOracle& oracle,
                                     const ExperimentConfig& cfg) {
  cfg.validate(oracle.ground_size());
  Report report;
  report.config = cfg.echo;
  report.workers = cfg.workers;
  report.cores = hardware_workers();
  report.seed = cfg.seed;
  std::uint64_t ordinal = 0;
  for (std::size_t k : cfg.ks) {
    for (const std::string& name : cfg.algorithms) {
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t run_seed = Rng::derive_seed(cfg.seed, ordinal++);
        try {
          report.results.push_back(detail::record_run(
              oracle, name, k, rep,
              detail::dispatch_algorithm(oracle, name, k, cfg.dash, run_seed,
                                         cfg.workers)));
        } catch (const std::exception& e) {
          AlgorithmRun failed;
          failed.algorithm = name;
          failed.k = k;
          failed.repetition = rep;
          failed.error = e.what();
          report.results.push_back(std::move(failed));
        }
      }
    }
  }
  return report;
}

inline json to_json(const AlgorithmRun& run) {
  json series = json::array();
  for (const auto& [round, value] : run.value_by_round) {
    series.push_back(json{{"round", round}, {"value", value}});
  }
  json j{{"algorithm", run.algorithm},
         {"k", run.k},
         {"repetition", run.repetition},
         {"value", run.value},
         {"adaptive_rounds", run.adaptive_rounds},
         {"queries", run.queries},
         {"wall_time_ms", run.wall_time_ms},
         {"selected", to_json(run.selected)},
         {"series", std::move(series)}};
  if (!run.error.empty()) j["error"] = run.error;
  return j;
}

inline json to_json(const Report& report) {
  json results = json::array();
  for (const auto& run : report.results) results.push_back(to_json(run));
  return json{{"config", report.config},
              {"environment", {{"workers", report.workers}, {"cores", report.cores}}},
              {"results", std::move(results)},
              {"seed", report.seed}};
}

/// Plot-ready flattening: one row per run.
inline std::string report_to_csv(const Report& report) {
  std::string out =
      "algorithm,k,repetition,value,adaptive_rounds,queries,wall_time_ms,error\n";
  for (const auto& run : report.results) {
    out += run.algorithm;
    out += ',' + std::to_string(run.k);
    out += ',' + std::to_string(run.repetition);
    out += ',' + std::to_string(run.value);
    out += ',' + std::to_string(run.adaptive_rounds);
    out += ',' + std::to_string(run.queries);
    out += ',' + std::to_string(run.wall_time_ms);
    out += ',';
    for (char c : run.error) out += c == ',' ? ';' : c;
    out += '\n';
  }
  return out;
}

}  // namespace subsel
