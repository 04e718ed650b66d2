#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "subsel/index_set.hpp"
#include "subsel/objectives.hpp"
#include "subsel/selection.hpp"
#include "subsel/verify.hpp"

namespace subsel {

using json = nlohmann::json;

inline json to_json(const IndexSet& s) { return json(s.indices()); }

inline json to_json(const DashParams& p) {
  json j{{"k", p.k},
         {"r", p.r},
         {"epsilon", p.epsilon},
         {"samples_m", p.samples_m},
         {"seed", p.seed}};
  j["alpha"] = p.alpha ? json(*p.alpha) : json("auto");
  j["opt"] = p.opt_guess ? json(*p.opt_guess) : json("auto");
  if (p.filter_cap) j["filter_cap"] = *p.filter_cap;
  return j;
}

inline json to_json(const RoundRecord& r) {
  json j{{"round", r.round},
         {"outer", r.outer},
         {"phase", r.phase},
         {"pool_size", r.pool_size},
         {"value", r.value},
         {"queries", r.queries},
         {"fallback", r.fallback}};
  const auto put = [&](const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
  };
  put("set_estimate", r.set_estimate);
  put("t", r.threshold_t);
  put("add_threshold", r.add_threshold);
  put("filter_threshold", r.filter_threshold);
  return j;
}

inline json to_json(const RunTrace& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) rounds.push_back(to_json(r));
  return json{{"rounds", std::move(rounds)},
              {"total_queries", t.total_queries},
              {"adaptive_rounds", t.adaptive_rounds},
              {"wall_time_ms", t.wall_time_ms}};
}

inline json to_json(const SelectionResult& r) {
  return json{{"selected", to_json(r.selected)},
              {"value", r.value},
              {"trace", to_json(r.trace)},
              {"params", to_json(r.params_echo)}};
}

inline json to_json(const SpectralBounds& b) {
  return json{{"lambda_min", b.lambda_min}, {"lambda_max", b.lambda_max},
              {"m", b.m},                   {"M", b.M},
              {"gamma", b.gamma},           {"alpha", b.alpha}};
}

inline json to_json(const RatioReport& r) {
  return json{{"gamma_hat", std::isfinite(r.gamma_hat) ? json(r.gamma_hat)
                                                       : json()},
              {"alpha_hat", r.alpha_hat},
              {"gamma_witness",
               {{"S", to_json(r.gamma_witness_s)}, {"A", to_json(r.gamma_witness_a)}}},
              {"alpha_witness",
               {{"S", to_json(r.alpha_witness_s)}, {"A", to_json(r.alpha_witness_a)}}},
              {"samples_used", r.samples_used}};
}

inline json to_json(const SandwichReport& r) {
  return json{{"trials", r.trials},
              {"violations", r.violations},
              {"gamma", r.gamma},
              {"tolerance", r.tolerance}};
}

inline json to_json(const StallReport& r) {
  return json{{"stalled", r.stalled},
              {"value", r.value},
              {"selected", to_json(r.selected)},
              {"fallback_rounds", r.fallback_rounds}};
}

/// Parses {"groups": [[...], ...], "weights": [...]} into a DiversityFunction.
inline DiversityFunction diversity_from_json(const json& j) {
  DiversityFunction div;
  if (!j.contains("groups") || !j.contains("weights")) {
    throw DataError("diversity JSON needs 'groups' and 'weights'");
  }
  div.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
  div.weights = j.at("weights").get<std::vector<double>>();
  return div;
}

/// Parses {"b": [...], "C": [[...], ...]} into a CovarianceModel.
inline CovarianceModel covariance_model_from_json(const json& j) {
  if (!j.contains("b") || !j.contains("C")) {
    throw DataError("covariance model JSON needs 'b' and 'C'");
  }
  const auto b = j.at("b").get<std::vector<double>>();
  const auto c = j.at("C").get<std::vector<std::vector<double>>>();
  const std::size_t n = b.size();
  if (c.size() != n) throw DataError("covariance model: C row count != |b|");
  CovarianceModel model;
  model.b = Eigen::Map<const Eigen::VectorXd>(b.data(),
                                              static_cast<Eigen::Index>(n));
  model.C.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i].size() != n) throw DataError("covariance model: C is not square");
    for (std::size_t k = 0; k < n; ++k) {
      model.C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          c[i][k];
    }
  }
  return model;
}

inline json to_json(const CovarianceModel& m) {
  json c = json::array();
  for (Eigen::Index i = 0; i < m.C.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.C.cols(); ++k) row.push_back(m.C(i, k));
    c.push_back(std::move(row));
  }
  json b = json::array();
  for (Eigen::Index i = 0; i < m.b.size(); ++i) b.push_back(m.b[i]);
  return json{{"b", std::move(b)}, {"C", std::move(c)}};
}

}  // namespace subsel
