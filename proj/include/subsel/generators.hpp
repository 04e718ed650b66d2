#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "subsel/dataset.hpp"
#include "subsel/errors.hpp"
#include "subsel/index_set.hpp"
#include "subsel/rng.hpp"
#include "subsel/solver.hpp"

namespace subsel {

namespace detail {

// Equicorrelated standard-normal design: every pair of columns has
// correlation rho. Built from a shared factor per observation.
inline Eigen::MatrixXd equicorrelated_features(std::size_t n, std::size_t d,
                                               double rho, Rng& rng) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ConfigError("feature covariance rho must lie in [0,1)");
  }
  const double shared = std::sqrt(rho);
  const double own = std::sqrt(1.0 - rho);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double g0 = rng.next_normal();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      x(i, j) = shared * g0 + own * rng.next_normal();
    }
  }
  return x;
}

}  // namespace detail

/// Synthetic regression data: n equicorrelated standardized features, a
/// random true support of the given size with coefficients ~ U(-2, 2), and
/// Gaussian noise of standard deviation 0.1 on the response.
inline Dataset generate_regression(std::size_t n, std::size_t d,
                                   std::size_t support, double rho,
                                   std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("generator needs n >= 1 and d >= 1");
  if (support > n) throw ConfigError("true support cannot exceed n");
  Rng rng(seed);
  Eigen::MatrixXd x = detail::equicorrelated_features(n, d, rho, rng);
  if (d > 1) standardize_columns(x);

  const IndexSet truth = sample_uniform_subset(IndexSet::full(n), support, rng);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j : truth) {
    beta[static_cast<Eigen::Index>(j)] = rng.next_uniform(-2.0, 2.0);
  }
  Eigen::VectorXd y = x * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y[i] += 0.1 * rng.next_normal();
  }
  return Dataset{std::move(x), std::move(y), {}};
}

/// Synthetic classification data: the regression recipe with the continuous
/// response mapped through the logistic function and thresholded at 0.5, i.e.
/// labels indicate a positive linear score.
inline Dataset generate_classification(std::size_t n, std::size_t d,
                                       std::size_t support, double rho,
                                       std::uint64_t seed) {
  Dataset data = generate_regression(n, d, support, rho, seed);
  for (Eigen::Index i = 0; i < data.response.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-data.response[i]));
    data.response[i] = p > 0.5 ? 1.0 : 0.0;
  }
  return data;
}

/// Synthetic experimental-design stimuli: n equicorrelated standardized
/// columns of dimension d, each normalized to unit l2 norm. The response is
/// unused by the A-optimality objective and is left at zero.
inline Dataset generate_design(std::size_t n, std::size_t d, double rho,
                               std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("generator needs n >= 1 and d >= 1");
  Rng rng(seed);
  Eigen::MatrixXd x = detail::equicorrelated_features(n, d, rho, rng);
  if (d > 1) standardize_columns(x);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double norm = x.col(j).norm();
    if (norm > 0.0) x.col(j) /= norm;
  }
  return Dataset{std::move(x),
                 Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)),
                 {}};
}

}  // namespace subsel
