// Command-line front end: data generation, subset selection, benchmarking
// and the built-in verification suite.
//
// Exit codes: 0 success, 1 verification violations, 2 usage error,
// 3 data error, 4 enumeration-guard error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "subsel/subsel.hpp"

namespace {

using subsel::json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitGuard = 4;

subsel::ObjectiveKind parse_objective(const std::string& name) {
  if (name == "reg") return subsel::ObjectiveKind::kReg;
  if (name == "r2") return subsel::ObjectiveKind::kR2;
  if (name == "class") return subsel::ObjectiveKind::kClass;
  if (name == "aopt") return subsel::ObjectiveKind::kAOpt;
  throw subsel::ConfigError("unknown objective '" + name + "'");
}

std::optional<double> parse_auto(const std::string& text, const char* flag) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw subsel::ConfigError(std::string(flag) + " expects a number or 'auto'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      if (i > start) out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw subsel::DataError("cannot write '" + path + "'");
  out << text;
}

void emit(const json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    write_text(out_path, payload.dump(2) + "\n");
  }
}

struct DataArgs {
  std::string objective = "reg";
  std::string features;
  std::string response;
  std::string diversity;
  std::string model;
  double beta = 1.0;
  double sigma = 1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--objective", objective,
                    "objective: reg, r2, class or aopt");
    cmd->add_option("--features", features, "features CSV path");
    cmd->add_option("--response", response, "response CSV path (1 column)");
    cmd->add_option("--diversity", diversity,
                    "diversity JSON path ({groups, weights})");
    cmd->add_option("--model", model,
                    "covariance model JSON ({b, C}); r2 only, replaces CSVs");
    cmd->add_option("--beta", beta, "A-optimality prior scale");
    cmd->add_option("--sigma", sigma, "A-optimality noise level");
  }

  subsel::SetFunctionOracle build_oracle() const {
    const subsel::ObjectiveKind kind = parse_objective(objective);
    if (!model.empty()) {
      if (kind != subsel::ObjectiveKind::kR2) {
        throw subsel::ConfigError("--model applies to the r2 objective only");
      }
      std::ifstream in(model);
      if (!in) throw subsel::DataError("cannot open '" + model + "'");
      std::optional<subsel::DiversityFunction> div;
      if (!diversity.empty()) {
        std::ifstream din(diversity);
        if (!din) throw subsel::DataError("cannot open '" + diversity + "'");
        div = subsel::diversity_from_json(json::parse(din));
      }
      return subsel::make_oracle(
          subsel::covariance_model_from_json(json::parse(in)), std::move(div));
    }
    if (features.empty()) {
      throw subsel::DataError("--features is required for objective '" +
                              objective + "'");
    }
    const bool needs_response = kind != subsel::ObjectiveKind::kAOpt;
    if (needs_response && response.empty()) {
      throw subsel::DataError("--response is required for objective '" +
                              objective + "'");
    }
    const subsel::LoadedDataset loaded = subsel::load_csv(
        features,
        response.empty() ? std::nullopt : std::make_optional(response));
    std::cerr << "loaded " << loaded.features.rows << " observations x "
              << loaded.features.cols << " columns"
              << (loaded.features.had_header ? " (header row)" : "") << "\n";

    std::optional<subsel::DiversityFunction> div;
    if (!diversity.empty()) {
      std::ifstream in(diversity);
      if (!in) throw subsel::DataError("cannot open '" + diversity + "'");
      div = subsel::diversity_from_json(json::parse(in));
    }
    std::optional<subsel::AOptParams> aopt;
    if (kind == subsel::ObjectiveKind::kAOpt) {
      aopt = subsel::AOptParams{beta, sigma};
    }
    return subsel::make_oracle(kind, loaded.dataset, aopt, std::move(div));
  }
};

struct SolverArgs {
  std::size_t k = 0;
  std::size_t r = 10;
  double epsilon = 0.1;
  std::string alpha = "auto";
  std::string opt = "auto";
  std::size_t samples = 5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  void add_to(CLI::App* cmd, bool require_k) {
    auto* opt_k = cmd->add_option("--k", k, "cardinality budget");
    if (require_k) opt_k->required();
    cmd->add_option("--r", r, "outer iterations");
    cmd->add_option("--epsilon", epsilon, "accuracy parameter in (0,1)");
    cmd->add_option("--alpha", alpha,
                    "differential-submodularity parameter or 'auto'");
    cmd->add_option("--opt", opt, "optimum guess or 'auto'");
    cmd->add_option("--samples", samples, "samples per expectation estimate");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--workers", workers, "worker threads for oracle queries");
  }

  subsel::DashParams params() const {
    subsel::DashParams p;
    p.k = k;
    p.r = r;
    p.epsilon = epsilon;
    p.samples_m = samples;
    p.seed = seed;
    p.alpha = parse_auto(alpha, "--alpha");
    p.opt_guess = parse_auto(opt, "--opt");
    return p;
  }
};

int run_generate(const std::string& objective, std::size_t n, std::size_t d,
                 std::size_t support, double rho, std::uint64_t seed,
                 const std::string& features, const std::string& response) {
  const subsel::ObjectiveKind kind = parse_objective(objective);
  if (features.empty()) {
    throw subsel::DataError("--features output path is required");
  }

  // Paper-shaped defaults per objective when a dimension is left at 0.
  std::size_t nn = n, dd = d, ss = support;
  double rr = rho;
  switch (kind) {
    case subsel::ObjectiveKind::kReg:
    case subsel::ObjectiveKind::kR2:
      if (nn == 0) nn = 500;
      if (dd == 0) dd = 1000;
      if (ss == 0) ss = 100;
      if (rr < 0) rr = 0.4;
      break;
    case subsel::ObjectiveKind::kClass:
      if (nn == 0) nn = 200;
      if (dd == 0) dd = 500;
      if (ss == 0) ss = 50;
      if (rr < 0) rr = 0.4;
      break;
    case subsel::ObjectiveKind::kAOpt:
      if (nn == 0) nn = 1024;
      if (dd == 0) dd = 256;
      if (rr < 0) rr = 0.8;
      break;
  }

  subsel::Dataset data;
  bool write_response = true;
  switch (kind) {
    case subsel::ObjectiveKind::kReg:
    case subsel::ObjectiveKind::kR2:
      data = subsel::generate_regression(nn, dd, ss, rr, seed);
      break;
    case subsel::ObjectiveKind::kClass:
      data = subsel::generate_classification(nn, dd, ss, rr, seed);
      break;
    case subsel::ObjectiveKind::kAOpt:
      data = subsel::generate_design(nn, dd, rr, seed);
      write_response = !response.empty();
      break;
  }
  if (kind != subsel::ObjectiveKind::kAOpt && response.empty()) {
    throw subsel::DataError("--response output path is required for '" +
                            objective + "'");
  }
  subsel::save_csv(data, features,
                   write_response && !response.empty()
                       ? std::make_optional(response)
                       : std::nullopt);
  std::cout << "wrote " << data.d() << " x " << data.n() << " features to "
            << features;
  if (write_response && !response.empty()) std::cout << " and " << response;
  std::cout << "\n";
  return kExitOk;
}

int run_select(const DataArgs& data_args, const SolverArgs& solver_args,
               const std::string& algorithm, const std::string& out,
               const std::string& format) {
  const subsel::SetFunctionOracle oracle = data_args.build_oracle();
  const subsel::DashParams params = solver_args.params();
  if (params.k > oracle.ground_size()) {
    throw subsel::ConfigError("--k exceeds the number of candidate columns");
  }

  subsel::SelectionResult result;
  if (algorithm == "dash") {
    result = subsel::dash_with_guessing(oracle, params, solver_args.workers);
  } else if (algorithm == "greedy") {
    result = subsel::greedy_sds_ma(oracle, params.k);
  } else if (algorithm == "greedy_parallel") {
    result = subsel::greedy_parallel(oracle, params.k, solver_args.workers);
  } else if (algorithm == "top_k") {
    result = subsel::top_k(oracle, params.k);
  } else if (algorithm == "random") {
    subsel::Rng rng(params.seed);
    result = subsel::random_k(oracle, params.k, rng);
  } else {
    throw subsel::ConfigError("unknown algorithm '" + algorithm + "'");
  }

  std::cerr << algorithm << ": value " << result.value << ", "
            << result.trace.adaptive_rounds << " adaptive rounds, "
            << result.trace.total_queries << " queries\n";

  if (format == "csv") {
    std::string csv =
        "algorithm,k,value,adaptive_rounds,queries,wall_time_ms,selected\n";
    csv += algorithm + ',' + std::to_string(params.k) + ',' +
           std::to_string(result.value) + ',' +
           std::to_string(result.trace.adaptive_rounds) + ',' +
           std::to_string(result.trace.total_queries) + ',' +
           std::to_string(result.trace.wall_time_ms) + ',';
    for (std::size_t i = 0; i < result.selected.size(); ++i) {
      if (i > 0) csv += ' ';
      csv += std::to_string(result.selected[i]);
    }
    csv += '\n';
    if (out.empty()) {
      std::cout << csv;
    } else {
      write_text(out, csv);
    }
  } else {
    json payload = subsel::to_json(result);
    payload["algorithm"] = algorithm;
    emit(payload, out);
  }
  return kExitOk;
}

int run_benchmark(const DataArgs& data_args, const SolverArgs& solver_args,
                  const std::string& algorithms, const std::string& k_sweep,
                  std::size_t repetitions, const std::string& out,
                  const std::string& format) {
  const subsel::SetFunctionOracle oracle = data_args.build_oracle();

  subsel::ExperimentConfig cfg;
  cfg.algorithms = split_list(algorithms);
  if (!k_sweep.empty()) {
    for (const std::string& tok : split_list(k_sweep)) {
      cfg.ks.push_back(static_cast<std::size_t>(std::stoull(tok)));
    }
  } else {
    cfg.ks = {solver_args.k};
  }
  cfg.dash = solver_args.params();
  cfg.workers = solver_args.workers;
  cfg.repetitions = repetitions;
  cfg.seed = solver_args.seed;
  cfg.echo = json{{"objective", data_args.objective},
                  {"features", data_args.features},
                  {"response", data_args.response},
                  {"algorithms", cfg.algorithms},
                  {"k", cfg.ks},
                  {"params", subsel::to_json(cfg.dash)},
                  {"workers", cfg.workers},
                  {"repetitions", repetitions}};

  const subsel::Report report =
      cfg.ks.size() == 1 ? subsel::run_accuracy_vs_rounds(oracle, cfg)
                         : subsel::run_accuracy_time_vs_k(oracle, cfg);
  for (const subsel::AlgorithmRun& run : report.results) {
    std::cerr << run.algorithm << " k=" << run.k << ": ";
    if (run.error.empty()) {
      std::cerr << "value " << run.value << ", rounds " << run.adaptive_rounds
                << ", " << run.wall_time_ms << " ms\n";
    } else {
      std::cerr << "error: " << run.error << "\n";
    }
  }
  if (format == "csv") {
    const std::string csv = subsel::report_to_csv(report);
    if (out.empty()) {
      std::cout << csv;
    } else {
      write_text(out, csv);
    }
  } else {
    emit(subsel::to_json(report), out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify subcommand: built-in constructions and bound checks.

struct CheckOutcome {
  json report;
  std::size_t violations = 0;
};

void expect(CheckOutcome& outcome, json& items, const std::string& what,
            bool ok, double got, double want, double tol) {
  items.push_back(json{{"check", what},
                       {"got", got},
                       {"want", want},
                       {"tolerance", tol},
                       {"ok", ok}});
  if (!ok) ++outcome.violations;
}

void expect_near(CheckOutcome& outcome, json& items, const std::string& what,
                 double got, double want, double tol) {
  expect(outcome, items, what, std::abs(got - want) <= tol, got, want, tol);
}

CheckOutcome check_counterexamples() {
  CheckOutcome outcome;
  json items = json::array();

  const subsel::R2Counterexample ce = subsel::make_r2_counterexample();
  expect_near(outcome, items, "r2({x4,x5})",
              subsel::eval_r2(ce.model, {3, 4}), 2.0 / 3.0, 1e-9);
  expect_near(outcome, items, "r2({x4})", subsel::eval_r2(ce.model, {3}), 0.5,
              1e-9);
  expect_near(outcome, items, "r2({x1,x4})", subsel::eval_r2(ce.model, {0, 3}),
              1.0, 1e-9);
  expect_near(outcome, items, "r2({x1})", subsel::eval_r2(ce.model, {0}), 0.0,
              1e-9);
  expect_near(outcome, items, "r2 brute force k=2",
              subsel::brute_force_opt(ce.oracle, 2).second, 1.0, 1e-9);
  expect_near(outcome, items, "r2 greedy k=2",
              subsel::greedy_sds_ma(ce.oracle, 2).value, 1.0, 1e-9);

  for (std::size_t k : {std::size_t{2}, std::size_t{4}, std::size_t{6}}) {
    const subsel::SetFunctionOracle toy = subsel::make_toy_weak(k);
    expect_near(outcome, items, "weak toy greedy k=" + std::to_string(k),
                subsel::greedy_sds_ma(toy, k).value, static_cast<double>(k),
                0.0);
    expect_near(outcome, items, "weak toy top_k value k=" + std::to_string(k),
                subsel::top_k(toy, k).value, 1.0, 0.0);
  }

  const subsel::SetFunctionOracle capped = subsel::make_toy_capped();
  expect_near(outcome, items, "capped f({v1,v2})",
              capped.eval(subsel::IndexSet{2, 3}), 1.0, 0.0);
  expect_near(outcome, items, "capped f({u1,v1})",
              capped.eval(subsel::IndexSet{0, 2}), 2.0, 0.0);
  bool rejected = false;
  try {
    capped.eval(subsel::IndexSet{0, 1, 2});
  } catch (const subsel::DomainError&) {
    rejected = true;
  }
  expect(outcome, items, "capped rejects |S| > 2", rejected, rejected ? 1 : 0,
         1, 0);

  outcome.report = json{{"check", "counterexamples"},
                        {"instances", items.size()},
                        {"violations", outcome.violations},
                        {"witnesses", items},
                        {"tolerances", json{{"r2", 1e-9}}}};
  return outcome;
}

CheckOutcome check_stall(std::uint64_t seed) {
  CheckOutcome outcome;
  json items = json::array();

  subsel::DashParams params;
  params.r = 1;
  params.epsilon = 0.0;
  params.seed = seed;

  {
    subsel::DashParams p = params;
    p.opt_guess = 2.0;
    const subsel::StallReport rep =
        subsel::demonstrate_stall(subsel::make_toy_capped(), 2, p);
    expect(outcome, items, "capped toy stalls at alpha=1", rep.stalled,
           rep.stalled ? 1 : 0, 1, 0);
  }
  {
    subsel::DashParams p = params;
    p.opt_guess = 1.0;
    const subsel::R2Counterexample ce = subsel::make_r2_counterexample();
    const subsel::StallReport rep = subsel::demonstrate_stall(ce.oracle, 2, p);
    expect(outcome, items, "six-vector instance stalls at alpha=1",
           rep.stalled, rep.stalled ? 1 : 0, 1, 0);
  }
  {
    subsel::DashParams p = params;
    p.opt_guess = 2.0;
    p.alpha = 0.5;
    const subsel::StallReport rep =
        subsel::demonstrate_stall(subsel::make_toy_capped(), 2, p);
    expect(outcome, items, "capped toy terminates at alpha=0.5",
           !rep.stalled && rep.value >= 1.0, rep.value, 1.0, 0.0);
  }

  outcome.report = json{{"check", "stall"},
                        {"instances", items.size()},
                        {"violations", outcome.violations},
                        {"witnesses", items},
                        {"tolerances", json::object()}};
  return outcome;
}

CheckOutcome check_ratios(std::uint64_t seed) {
  CheckOutcome outcome;
  json items = json::array();

  const subsel::RatioReport weak =
      subsel::submodularity_ratio(subsel::make_toy_weak(3), 6);
  expect(outcome, items, "weak toy gamma >= 0.5",
         weak.gamma_hat >= 0.5 - 1e-12, weak.gamma_hat, 0.5, 1e-12);

  subsel::Rng rng(seed);
  const subsel::RatioReport capped = subsel::diff_submodularity_witness(
      subsel::make_toy_capped(), 4000, 2, rng, 2);
  expect(outcome, items, "capped toy alpha >= 0.25",
         capped.alpha_hat >= 0.25 - 1e-12, capped.alpha_hat, 0.25, 1e-12);

  const subsel::SetFunctionOracle modular(
      6, [](const subsel::IndexSet& s) { return 0.5 * s.size(); });
  const subsel::RatioReport mod = subsel::submodularity_ratio(modular, 3);
  expect_near(outcome, items, "modular gamma == 1", mod.gamma_hat, 1.0, 1e-12);

  outcome.report = json{{"check", "ratios"},
                        {"instances", items.size()},
                        {"violations", outcome.violations},
                        {"witnesses", items},
                        {"tolerances", json{{"ratio", 1e-12}}}};
  return outcome;
}

CheckOutcome check_sandwich(std::uint64_t seed, std::size_t trials) {
  CheckOutcome outcome;
  json items = json::array();
  for (double rho : {0.0, 0.4, 0.8}) {
    const subsel::Dataset data =
        subsel::generate_regression(8, 64, 4, rho, seed + 100 * rho);
    subsel::Rng rng(seed);
    const subsel::SandwichReport rep =
        subsel::sandwich_check(data, trials, rng);
    expect(outcome, items, "sandwich rho=" + std::to_string(rho),
           rep.violations == 0, static_cast<double>(rep.violations), 0, 0);
    items.back()["gamma"] = rep.gamma;
  }
  outcome.report = json{{"check", "sandwich"},
                        {"instances", items.size()},
                        {"violations", outcome.violations},
                        {"witnesses", items},
                        {"tolerances", json{{"sandwich", 1e-8}}}};
  return outcome;
}

CheckOutcome check_aopt(std::uint64_t seed) {
  CheckOutcome outcome;
  json items = json::array();

  subsel::Rng rng(seed);
  std::size_t closed_form_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const subsel::AOptParams p{0.2 + rng.next_uniform(0.0, 3.0),
                               0.2 + rng.next_uniform(0.0, 3.0)};
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = rng.next_normal();
    x /= x.norm();
    subsel::Dataset unit;
    unit.features = x;
    unit.response = Eigen::VectorXd::Zero(6);
    const double got = subsel::eval_aopt(unit, subsel::IndexSet{0}, p);
    const double beta2 = p.beta * p.beta;
    const double inv_sigma2 = 1.0 / (p.sigma * p.sigma);
    const double want = inv_sigma2 / (beta2 * (beta2 + inv_sigma2));
    if (std::abs(got - want) > 1e-10) ++closed_form_bad;
  }
  expect(outcome, items, "rank-one closed form (100 draws)",
         closed_form_bad == 0, static_cast<double>(closed_form_bad), 0, 1e-10);

  const subsel::Dataset design = subsel::generate_design(16, 8, 0.5, seed);
  const subsel::AOptParams p{0.9, 1.1};
  const double norm = design.features.operatorNorm();
  const double inv_sigma2 = 1.0 / (p.sigma * p.sigma);
  const double denom = p.beta * p.beta + inv_sigma2 * norm * norm;
  const double per_element = inv_sigma2 / (denom * denom);
  const subsel::IndexSet full = subsel::IndexSet::full(16);
  std::size_t bound_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const subsel::IndexSet a =
        subsel::sample_uniform_subset(full, 1 + rng.next_index(4), rng);
    const subsel::IndexSet s =
        subsel::sample_uniform_subset(full.minus(a), rng.next_index(5), rng);
    const double gain = subsel::eval_aopt(design, s.unioned(a), p) -
                        subsel::eval_aopt(design, s, p);
    if (gain < per_element * static_cast<double>(a.size()) - 1e-12) {
      ++bound_bad;
    }
  }
  expect(outcome, items, "per-element lower bound (200 draws)", bound_bad == 0,
         static_cast<double>(bound_bad), 0, 1e-12);

  outcome.report = json{{"check", "aopt"},
                        {"instances", items.size()},
                        {"violations", outcome.violations},
                        {"witnesses", items},
                        {"tolerances",
                         json{{"closed_form", 1e-10}, {"lower_bound", 1e-12}}}};
  return outcome;
}

int run_verify(const std::string& check, std::uint64_t seed,
               std::size_t trials, const std::string& out) {
  std::vector<CheckOutcome> outcomes;
  const bool all = check == "all";
  if (all || check == "counterexamples") outcomes.push_back(check_counterexamples());
  if (all || check == "stall") outcomes.push_back(check_stall(seed));
  if (all || check == "ratios") outcomes.push_back(check_ratios(seed));
  if (all || check == "sandwich") outcomes.push_back(check_sandwich(seed, trials));
  if (all || check == "aopt") outcomes.push_back(check_aopt(seed));
  if (outcomes.empty()) {
    throw subsel::ConfigError("unknown check '" + check + "'");
  }

  json payload = json::array();
  std::size_t total = 0;
  for (const CheckOutcome& o : outcomes) {
    payload.push_back(o.report);
    total += o.violations;
    std::cout << o.report.at("check").get<std::string>() << ": "
              << (o.violations == 0 ? "ok" : "FAILED") << " ("
              << o.report.at("instances").get<std::size_t>() << " checks, "
              << o.violations << " violations)\n";
  }
  if (!out.empty()) {
    write_text(out, payload.dump(2) + "\n");
  }
  return total == 0 ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subset-selection toolkit: adaptive sampling, baselines and "
               "verification"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  std::string gen_objective = "reg";
  std::size_t gen_n = 0, gen_d = 0, gen_support = 0;
  double gen_rho = -1.0;
  std::uint64_t gen_seed = 0;
  std::string gen_features, gen_response;
  gen->add_option("--objective", gen_objective, "reg, r2, class or aopt");
  gen->add_option("--n", gen_n, "number of candidate columns");
  gen->add_option("--d", gen_d, "number of observations / dimensions");
  gen->add_option("--support", gen_support, "true support size");
  gen->add_option("--rho", gen_rho, "pairwise feature covariance");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--features", gen_features, "output features CSV");
  gen->add_option("--response", gen_response, "output response CSV");

  // select
  auto* sel = app.add_subcommand("select", "run one subset selection");
  DataArgs sel_data;
  SolverArgs sel_solver;
  std::string sel_algorithm = "dash";
  std::string sel_out, sel_format = "json";
  sel_data.add_to(sel);
  sel_solver.add_to(sel, /*require_k=*/true);
  sel->add_option("--algorithm", sel_algorithm,
                  "dash, greedy, greedy_parallel, top_k or random");
  sel->add_option("--out", sel_out, "output path (stdout when omitted)");
  sel->add_option("--format", sel_format, "json or csv");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "compare algorithms");
  DataArgs bench_data;
  SolverArgs bench_solver;
  std::string bench_algorithms = "dash,greedy,top_k,random";
  std::string bench_sweep;
  std::size_t bench_reps = 1;
  std::string bench_out, bench_format = "json";
  bench_data.add_to(bench);
  bench_solver.add_to(bench, /*require_k=*/false);
  bench->add_option("--algorithms", bench_algorithms, "comma-separated list");
  bench->add_option("--k-sweep", bench_sweep,
                    "comma-separated budgets (enables the sweep template)");
  bench->add_option("--repetitions", bench_reps, "repetitions per setting");
  bench->add_option("--out", bench_out, "output path (stdout when omitted)");
  bench->add_option("--format", bench_format, "json or csv");

  // verify
  auto* ver = app.add_subcommand("verify", "run built-in verification checks");
  std::string ver_check = "all";
  std::uint64_t ver_seed = 7;
  std::size_t ver_trials = 500;
  std::string ver_out;
  ver->add_option("--check", ver_check,
                  "counterexamples, stall, ratios, sandwich, aopt or all");
  ver->add_option("--seed", ver_seed, "RNG seed");
  ver->add_option("--trials", ver_trials, "trials per sampled check");
  ver->add_option("--out", ver_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      return run_generate(gen_objective, gen_n, gen_d, gen_support, gen_rho,
                          gen_seed, gen_features, gen_response);
    }
    if (*sel) {
      return run_select(sel_data, sel_solver, sel_algorithm, sel_out,
                        sel_format);
    }
    if (*bench) {
      return run_benchmark(bench_data, bench_solver, bench_algorithms,
                           bench_sweep, bench_reps, bench_out, bench_format);
    }
    if (*ver) {
      return run_verify(ver_check, ver_seed, ver_trials, ver_out);
    }
  } catch (const subsel::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const subsel::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const subsel::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
