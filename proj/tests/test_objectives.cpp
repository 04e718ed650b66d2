#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "subsel/generators.hpp"
#include "subsel/objectives.hpp"
#include "subsel/rng.hpp"
#include "subsel/verify.hpp"
#include "test_oracles.hpp"

using namespace subsel;

namespace {

Dataset random_dataset(std::size_t d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
      data.features(i, j) = rng.next_normal();
    }
  }
  data.response.resize(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < data.response.size(); ++i) {
    data.response[i] = rng.next_normal();
  }
  return data;
}

Dataset random_binary_dataset(std::size_t d, std::size_t n, std::uint64_t seed) {
  Dataset data = random_dataset(d, n, seed);
  for (Eigen::Index i = 0; i < data.response.size(); ++i) {
    data.response[i] = data.response[i] > 0.0 ? 1.0 : 0.0;
  }
  return data;
}

}  // namespace

TEST_CASE("least squares: empty support") {
  Dataset data = random_dataset(6, 4, 1);
  const FitResult fit = fit_least_squares(data, {});
  CHECK(fit.objective_value == 0.0);
  CHECK(fit.coefficients.isZero(0.0));
}

TEST_CASE("least squares: single column closed form") {
  Dataset data = random_dataset(7, 5, 2);
  for (std::size_t j = 0; j < 5; ++j) {
    const Eigen::VectorXd x = data.features.col(static_cast<Eigen::Index>(j));
    const double expected = std::pow(x.dot(data.response), 2) / x.squaredNorm();
    const double got = eval_reg(data, IndexSet{j});
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));

    // Independent check: scan the coefficient over a refined grid.
    const double grid_best = testutil::grid_maximize(
        [&](const Eigen::VectorXd& w) {
          return data.response.squaredNorm() -
                 (data.response - x * w[0]).squaredNorm();
        },
        1, 8.0);
    CHECK(got == doctest::Approx(grid_best).epsilon(1e-7));
  }
}

TEST_CASE("least squares: square invertible system interpolates") {
  Dataset data = random_dataset(5, 5, 3);
  const double got = eval_reg(data, IndexSet::full(5));
  CHECK(got == doctest::Approx(data.response.squaredNorm()).epsilon(1e-9));
}

TEST_CASE("least squares: rank-deficient support stays finite") {
  Dataset data = random_dataset(6, 4, 4);
  data.features.col(1) = data.features.col(0);  // exact duplicate
  const FitResult fit = fit_least_squares(data, IndexSet{0, 1});
  CHECK(std::isfinite(fit.objective_value));
  const double single = eval_reg(data, IndexSet{0});
  CHECK(fit.objective_value == doctest::Approx(single).epsilon(1e-6));
}

TEST_CASE("least squares rejects non-finite data") {
  Dataset data = random_dataset(4, 3, 5);
  data.features(2, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit_least_squares(data, IndexSet{1}), DataError);
}

TEST_CASE("eval_reg: 6x8 instance matches grid refinement at |S| = 3") {
  Dataset data = random_dataset(6, 8, 6);
  const IndexSet s{1, 4, 6};
  const Eigen::MatrixXd xs = data.columns(s);
  const double grid_best = testutil::grid_maximize(
      [&](const Eigen::VectorXd& w) {
        return data.response.squaredNorm() -
               (data.response - xs * w).squaredNorm();
      },
      3, 8.0);
  CHECK(eval_reg(data, s) == doctest::Approx(grid_best).epsilon(1e-6));
}

TEST_CASE("r2: six-vector instance values") {
  const R2Counterexample ce = make_r2_counterexample();
  CHECK(eval_r2(ce.model, IndexSet{3, 4}) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(eval_r2(ce.model, IndexSet{0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eval_r2(ce.model, IndexSet{3}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval_r2(ce.model, IndexSet{0, 3}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eval_r2(ce.model, IndexSet{2, 5}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("r2 range on a standardized model") {
  Dataset data = generate_regression(6, 40, 3, 0.3, 7);
  const CovarianceModel model = make_covariance_model(data);
  CHECK_NOTHROW(model.validate());
  for (std::uint64_t mask = 0; mask < (1u << 6); ++mask) {
    const double v = eval_r2(model, IndexSet::from_mask(mask));
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-9);
  }
}

TEST_CASE("logistic: empty support is the null model") {
  Dataset data = random_binary_dataset(8, 3, 8);
  const FitResult fit = fit_logistic(data, {}, 1e-8);
  CHECK(fit.coefficients.isZero(0.0));
  CHECK(fit.objective_value ==
        doctest::Approx(-8.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(eval_class(data, {}) == 0.0);
}

TEST_CASE("logistic: orthogonal feature gets a zero coefficient") {
  Dataset data;
  data.features.resize(4, 1);
  data.features << 1.0, -1.0, 1.0, -1.0;
  data.response.resize(4);
  data.response << 1.0, 1.0, 0.0, 0.0;  // x^T (y - 1/2) = 0
  const FitResult fit = fit_logistic(data, IndexSet{0}, 1e-10);
  CHECK(fit.converged);
  CHECK(std::abs(fit.coefficients[0]) < 1e-10);
}

TEST_CASE("logistic rejects a non-binary response") {
  Dataset data = random_dataset(6, 3, 23);
  CHECK_THROWS_AS(fit_logistic(data, IndexSet{0}, 1e-8), DataError);
}

TEST_CASE("logistic: 8x3 instance matches grid maximizer within 1e-4") {
  // Labels disagree with the score sign on several rows, so the instance is
  // not separable and the maximizer is interior.
  Dataset data;
  data.features.resize(8, 3);
  data.features << 1.0, 0.3, -0.2,
                   0.8, -0.5, 0.1,
                  -0.9, 0.2, 0.4,
                  -1.1, -0.4, -0.3,
                   0.6, 1.0, 0.2,
                  -0.5, -1.2, 0.3,
                   1.3, 0.4, -0.6,
                  -1.2, 0.1, 0.5;
  data.response.resize(8);
  data.response << 1, 0, 0, 1, 1, 0, 0, 1;
  const IndexSet s{0, 2};
  const Eigen::MatrixXd xs = data.columns(s);
  const auto ll = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd z = xs * w;
    double out = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      out += data.response[i] * z[i] -
             (std::max(z[i], 0.0) + std::log1p(std::exp(-std::abs(z[i]))));
    }
    return out;
  };
  const double grid_best = testutil::grid_maximize(ll, 2, 6.0);
  const FitResult fit = fit_logistic(data, s, 1e-10);
  CHECK(fit.converged);
  CHECK(std::abs(fit.objective_value - grid_best) < 1e-4);
}

TEST_CASE("eval_class nested monotonicity within solver tolerance") {
  Dataset data = random_binary_dataset(12, 6, 10);
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t t_size = 1 + rng.next_index(6);
    const IndexSet t = sample_uniform_subset(IndexSet::full(6), t_size, rng);
    const std::size_t s_size = rng.next_index(t_size + 1);
    const IndexSet s = sample_uniform_subset(t, s_size, rng);
    CHECK(eval_class(data, s) <= eval_class(data, t) + 1e-6);
  }
}

TEST_CASE("aopt: empty set and rank-one closed form") {
  Dataset data = random_dataset(5, 4, 11);
  const AOptParams p{1.3, 0.7};
  CHECK(eval_aopt(data, {}, p) == 0.0);

  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const AOptParams q{0.2 + rng.next_uniform(0.0, 3.0),
                       0.2 + rng.next_uniform(0.0, 3.0)};
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.next_normal();
    x /= x.norm();
    Dataset unit;
    unit.features = x;
    unit.response = Eigen::VectorXd::Zero(5);
    const double got = eval_aopt(unit, IndexSet{0}, q);
    const double beta2 = q.beta * q.beta;
    const double inv_sigma2 = 1.0 / (q.sigma * q.sigma);
    const double expected = inv_sigma2 / (beta2 * (beta2 + inv_sigma2));
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("aopt: per-element marginal lower bound on unit-norm stimuli") {
  Dataset data = generate_design(12, 6, 0.5, 13);
  const AOptParams p{0.9, 1.1};
  const double spectral = data.features.operatorNorm();
  const double inv_sigma2 = 1.0 / (p.sigma * p.sigma);
  const double denom = p.beta * p.beta + inv_sigma2 * spectral * spectral;
  const double per_element = inv_sigma2 / (denom * denom);

  Rng rng(14);
  const IndexSet full = IndexSet::full(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t a_size = 1 + rng.next_index(4);
    const IndexSet a = sample_uniform_subset(full, a_size, rng);
    const std::size_t s_size = rng.next_index(5);
    const IndexSet s = sample_uniform_subset(full.minus(a), s_size, rng);
    const double gain = eval_aopt(data, s.unioned(a), p) - eval_aopt(data, s, p);
    CHECK(gain >= per_element * static_cast<double>(a.size()) - 1e-12);
  }
}

TEST_CASE("diversity: values and exhaustive submodularity") {
  DiversityFunction div;
  div.groups = {{0, 1, 2, 3, 4}, {5, 6, 7}, {0, 5}};
  div.weights = {1.0, 2.0, 0.5};
  div.validate(8);
  CHECK(eval_diversity(div, {}) == 0.0);

  DiversityFunction single;
  single.groups = {{0, 1, 2, 3, 4, 5}};
  single.weights = {1.0};
  CHECK(eval_diversity(single, IndexSet{0, 2, 3, 5}) == doctest::Approx(2.0));

  SetFunctionOracle oracle(8, [div](const IndexSet& s) {
    return eval_diversity(div, s);
  });
  CHECK(testutil::count_dr_violations(oracle) == 0);
}

TEST_CASE("diversity validation rejects uncovered elements") {
  DiversityFunction div;
  div.groups = {{0, 1}};
  div.weights = {1.0};
  CHECK_THROWS_AS(div.validate(3), DataError);
}

TEST_CASE("make_oracle: composition and configuration errors") {
  Dataset data = random_dataset(10, 6, 15);
  CHECK_THROWS_AS(make_oracle(ObjectiveKind::kAOpt, data), ConfigError);

  const AOptParams p{1.0, 1.0};
  DiversityFunction div;
  div.groups = {{0, 1, 2}, {3, 4, 5}};
  div.weights = {0.7, 1.3};
  const SetFunctionOracle plain = make_oracle(ObjectiveKind::kAOpt, data, p);
  const SetFunctionOracle with_div =
      make_oracle(ObjectiveKind::kAOpt, data, p, div);
  for (std::uint64_t mask : {0ull, 3ull, 21ull, 63ull}) {
    const IndexSet s = IndexSet::from_mask(mask);
    CHECK(with_div.eval(s) ==
          doctest::Approx(plain.eval(s) + eval_diversity(div, s)).epsilon(1e-12));
  }

  const R2Counterexample ce = make_r2_counterexample();
  CHECK(ce.oracle.eval(IndexSet{3, 4}) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("reg oracle agrees with the direct fit path") {
  Dataset data = random_dataset(9, 7, 16);
  const SetFunctionOracle oracle = make_oracle(ObjectiveKind::kReg, data);
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t size = rng.next_index(6);
    const IndexSet s = sample_uniform_subset(IndexSet::full(7), size, rng);
    CHECK(oracle.eval(s) == doctest::Approx(eval_reg(data, s)).epsilon(1e-9));
  }
}

TEST_CASE("toy weak marginal example") {
  const SetFunctionOracle toy = make_toy_weak(3);  // u: 0..2, v: 3..5
  CHECK(marginal(toy, IndexSet{0}, IndexSet{3}) == 2.0);
  CHECK(marginal(toy, IndexSet{}, IndexSet{3}) == toy.eval(IndexSet{3}));
}

TEST_CASE("objective oracles: normalization, monotonicity, determinism") {
  Dataset reg_data = generate_regression(8, 30, 4, 0.4, 18);
  Dataset class_data = generate_classification(6, 40, 3, 0.2, 19);
  Dataset design_data = generate_design(8, 5, 0.3, 20);

  const SetFunctionOracle reg = make_oracle(ObjectiveKind::kReg, reg_data);
  const SetFunctionOracle r2 = make_oracle(ObjectiveKind::kR2, reg_data);
  const SetFunctionOracle cls = make_oracle(ObjectiveKind::kClass, class_data);
  const SetFunctionOracle aopt =
      make_oracle(ObjectiveKind::kAOpt, design_data, AOptParams{1.0, 1.0});

  struct Case {
    const SetFunctionOracle* oracle;
    double tol;
  };
  const Case cases[] = {{&reg, 1e-9}, {&r2, 1e-9}, {&aopt, 1e-9}, {&cls, 1e-6}};

  for (const Case& c : cases) {
    CHECK(c.oracle->eval(IndexSet{}) == 0.0);
    const std::size_t n = c.oracle->ground_size();
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t t_size = 1 + rng.next_index(n);
      const IndexSet t = sample_uniform_subset(IndexSet::full(n), t_size, rng);
      const IndexSet s = sample_uniform_subset(t, rng.next_index(t_size + 1), rng);
      CHECK(c.oracle->eval(s) <= c.oracle->eval(t) + c.tol);
    }
    const IndexSet probe = sample_uniform_subset(IndexSet::full(n), n / 2, rng);
    const double v1 = c.oracle->eval(probe);
    const double v2 = c.oracle->eval(probe);
    CHECK(v1 == v2);
  }
}
