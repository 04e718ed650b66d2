#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "subsel/dataset.hpp"
#include "subsel/errors.hpp"
#include "subsel/index_set.hpp"
#include "subsel/oracle.hpp"

namespace subsel {

/// Result of fitting a restricted-support linear or logistic model.
struct FitResult {
  Eigen::VectorXd coefficients;  // length n, exactly zero outside the support
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Bayesian A-optimality parameters: isotropic prior precision beta^2 I and
/// observation noise standard deviation sigma.
struct AOptParams {
  double beta = 1.0;
  double sigma = 1.0;

  void validate() const {
    if (!(beta > 0.0) || !(sigma > 0.0)) {
      throw DataError("A-optimality parameters require beta > 0 and sigma > 0");
    }
  }
};

/// Second-moment description of a regression problem: b holds the covariances
/// between the response and each predictor, C the predictor covariance matrix
/// (unit diagonal, i.e. standardized predictors).
struct CovarianceModel {
  Eigen::VectorXd b;  // length n
  Eigen::MatrixXd C;  // n x n

  std::size_t n() const { return static_cast<std::size_t>(b.size()); }

  void validate() const {
    if (b.size() < 1 || C.rows() != b.size() || C.cols() != b.size()) {
      throw DataError("covariance model has inconsistent shapes");
    }
    if (!b.allFinite() || !C.allFinite()) {
      throw DataError("covariance model contains non-finite entries");
    }
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
      throw DataError("covariance matrix is not symmetric");
    }
    if ((C.diagonal().array() - 1.0).abs().maxCoeff() > 1e-8) {
      throw DataError("covariance matrix does not have a unit diagonal");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw DataError("covariance matrix is not positive semidefinite");
    }
  }
};

/// Weighted concave-over-group-cardinality diversity term
/// d(S) = sum_g w_g * sqrt(|S intersect g|); monotone and submodular.
struct DiversityFunction {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> weights;

  void validate(std::size_t ground_size) const {
    if (groups.size() != weights.size()) {
      throw DataError("diversity groups and weights differ in length");
    }
    std::vector<bool> covered(ground_size, false);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!(weights[g] >= 0.0)) {
        throw DataError("diversity weights must be nonnegative");
      }
      for (std::size_t e : groups[g]) {
        if (e >= ground_size) {
          throw DataError("diversity group references an element out of range");
        }
        covered[e] = true;
      }
    }
    for (std::size_t e = 0; e < ground_size; ++e) {
      if (!covered[e]) {
        throw DataError("element " + std::to_string(e) +
                        " belongs to no diversity group");
      }
    }
  }
};

namespace detail {

// Solves G w = c for symmetric PSD G via Cholesky; adds ridge jitter when the
// factorization reports a non-positive pivot.
inline Eigen::VectorXd solve_spd(Eigen::MatrixXd g, const Eigen::VectorXd& c,
                                 double jitter = 1e-10) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    g.diagonal().array() += jitter;
    llt.compute(g);
    if (llt.info() != Eigen::Success) {
      g.diagonal().array() += jitter * std::max(1.0, g.diagonal().maxCoeff());
      llt.compute(g);
    }
  }
  return llt.solve(c);
}

inline Eigen::MatrixXd gather_gram(const Eigen::MatrixXd& gram,
                                   const IndexSet& s) {
  const Eigen::Index m = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd out(m, m);
  const auto& idx = s.indices();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = gram(static_cast<Eigen::Index>(idx[i]),
                       static_cast<Eigen::Index>(idx[j]));
    }
  }
  return out;
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const IndexSet& s) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(s.size()));
  Eigen::Index i = 0;
  for (std::size_t e : s) out[i++] = v[static_cast<Eigen::Index>(e)];
  return out;
}

// Numerically stable log(1 + exp(z)).
inline double log1p_exp(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace detail

/// Least-squares fit restricted to the given support. The objective value is
/// the variance reduction |y|^2 - |y - X_S w*|^2; a rank-deficient restricted
/// Gram matrix is handled with 1e-10 ridge jitter.
inline FitResult fit_least_squares(const Dataset& data, const IndexSet& s) {
  data.validate();
  s.validate(data.n());
  FitResult out;
  out.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.n()));
  if (s.empty()) return out;

  const Eigen::MatrixXd xs = data.columns(s);
  const Eigen::MatrixXd gram = xs.transpose() * xs;
  const Eigen::VectorXd xty = xs.transpose() * data.response;
  const Eigen::VectorXd w = detail::solve_spd(gram, xty);

  const double rss = (data.response - xs * w).squaredNorm();
  out.objective_value = data.response.squaredNorm() - rss;
  Eigen::Index i = 0;
  for (std::size_t e : s) {
    out.coefficients[static_cast<Eigen::Index>(e)] = w[i++];
  }
  out.iterations = 1;
  out.converged = true;
  return out;
}

/// Variance reduction of the response given the selected columns.
inline double eval_reg(const Dataset& data, const IndexSet& s) {
  return fit_least_squares(data, s).objective_value;
}

/// Squared multiple correlation b_S^T C_S^{-1} b_S.
inline double eval_r2(const CovarianceModel& model, const IndexSet& s) {
  s.validate(model.n());
  if (s.empty()) return 0.0;
  const Eigen::MatrixXd cs = detail::gather_gram(model.C, s);
  const Eigen::VectorXd bs = detail::gather(model.b, s);
  return bs.dot(detail::solve_spd(cs, bs));
}

/// Logistic log-likelihood maximizer restricted to the support, via Newton
/// iterations with a small ridge (1e-8) for separation stability. The
/// objective value is the unpenalized log-likelihood at the fitted
/// coefficients; converged is set once the gradient norm drops below tol.
inline FitResult fit_logistic(const Dataset& data, const IndexSet& s,
                              double tol = 1e-8) {
  data.validate();
  s.validate(data.n());
  if (!(tol > 0.0)) throw DataError("logistic tolerance must be positive");
  if (!data.binary_response()) {
    throw DataError("logistic fit requires a response in {0,1}");
  }

  const double null_ll =
      -std::log(2.0) * static_cast<double>(data.d());  // ll at w = 0

  FitResult out;
  out.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.n()));
  if (s.empty()) {
    out.objective_value = null_ll;
    return out;
  }

  constexpr double kRidge = 1e-8;
  constexpr int kMaxIter = 100;

  const Eigen::MatrixXd xs = data.columns(s);
  const Eigen::VectorXd& y = data.response;
  const Eigen::Index m = xs.cols();

  const auto penalized_ll = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd z = xs * w;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      ll += y[i] * z[i] - detail::log1p_exp(z[i]);
    }
    return ll - 0.5 * kRidge * w.squaredNorm();
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  double current = penalized_ll(w);
  bool converged = false;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd z = xs * w;
    const Eigen::VectorXd p =
        (1.0 / (1.0 + (-z.array()).exp())).matrix();
    const Eigen::VectorXd grad = xs.transpose() * (y - p) - kRidge * w;
    if (grad.norm() < tol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd wdiag = (p.array() * (1.0 - p.array())).matrix();
    Eigen::MatrixXd hess = xs.transpose() * wdiag.asDiagonal() * xs;
    hess.diagonal().array() += kRidge;
    const Eigen::VectorXd step = detail::solve_spd(hess, grad);

    // Backtracking keeps Newton honest under near-separation.
    double scale = 1.0;
    Eigen::VectorXd next = w + step;
    double next_val = penalized_ll(next);
    for (int h = 0; h < 40 && !(next_val >= current - 1e-12); ++h) {
      scale *= 0.5;
      next = w + scale * step;
      next_val = penalized_ll(next);
    }
    w = next;
    current = next_val;
  }

  const Eigen::VectorXd z = xs * w;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    ll += y[i] * z[i] - detail::log1p_exp(z[i]);
  }
  out.objective_value = ll;
  out.iterations = iter;
  out.converged = converged;
  Eigen::Index i = 0;
  for (std::size_t e : s) {
    out.coefficients[static_cast<Eigen::Index>(e)] = w[i++];
  }
  return out;
}

/// Normalized classification objective: log-likelihood gain over the empty
/// model, so that f(empty) = 0.
inline double eval_class(const Dataset& data, const IndexSet& s,
                         double tol = 1e-8) {
  const double null_ll = -std::log(2.0) * static_cast<double>(data.d());
  return fit_logistic(data, s, tol).objective_value - null_ll;
}

/// Bayesian A-optimality value: the reduction in posterior trace
/// Tr(Lambda^{-1}) - Tr((Lambda + sigma^{-2} X_S X_S^T)^{-1}), computed with a
/// direct d x d symmetric factorization per query.
inline double eval_aopt(const Dataset& data, const IndexSet& s,
                        const AOptParams& p) {
  data.validate();
  p.validate();
  s.validate(data.n());
  if (s.empty()) return 0.0;

  const Eigen::Index d = static_cast<Eigen::Index>(data.d());
  const double beta2 = p.beta * p.beta;
  const double inv_sigma2 = 1.0 / (p.sigma * p.sigma);

  const Eigen::MatrixXd xs = data.columns(s);
  Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(d, d) * beta2;
  prec.noalias() += inv_sigma2 * (xs * xs.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  return static_cast<double>(d) / beta2 - inv.trace();
}

/// Diversity value sum_g w_g * sqrt(|S intersect g|).
inline double eval_diversity(const DiversityFunction& div, const IndexSet& s) {
  double total = 0.0;
  for (std::size_t g = 0; g < div.groups.size(); ++g) {
    std::size_t count = 0;
    for (std::size_t e : div.groups[g]) {
      if (s.contains(e)) ++count;
    }
    total += div.weights[g] * std::sqrt(static_cast<double>(count));
  }
  return total;
}

/// Which statistical objective an oracle evaluates.
enum class ObjectiveKind { kReg, kR2, kClass, kAOpt };

inline const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kReg: return "reg";
    case ObjectiveKind::kR2: return "r2";
    case ObjectiveKind::kClass: return "class";
    case ObjectiveKind::kAOpt: return "aopt";
  }
  return "?";
}

/// Correlation-form covariance model of a dataset: columns and response are
/// standardized, b_j is the response/predictor correlation and C the predictor
/// correlation matrix.
inline CovarianceModel make_covariance_model(const Dataset& data) {
  data.validate();
  Eigen::MatrixXd x = data.features;
  standardize_columns(x);
  Eigen::VectorXd y = data.response;
  y.array() -= y.mean();
  const double sd = std::sqrt(y.squaredNorm() / static_cast<double>(y.size()));
  if (sd > 0.0) y /= sd;
  const double d = static_cast<double>(data.d());
  CovarianceModel model;
  model.b = x.transpose() * y / d;
  model.C = x.transpose() * x / d;
  return model;
}

namespace detail {

struct RegContext {
  Eigen::MatrixXd gram;  // X^T X, n x n
  Eigen::VectorXd xty;   // X^T y
};

inline double eval_reg_cached(const RegContext& ctx, const IndexSet& s) {
  if (s.empty()) return 0.0;
  const Eigen::MatrixXd gs = gather_gram(ctx.gram, s);
  const Eigen::VectorXd cs = gather(ctx.xty, s);
  return cs.dot(solve_spd(gs, cs));
}

inline SetFunctionOracle compose(std::size_t n, SetFunctionOracle::EvalFn base,
                                 std::optional<DiversityFunction> diversity) {
  if (!diversity) return SetFunctionOracle(n, std::move(base));
  auto div = std::make_shared<const DiversityFunction>(*std::move(diversity));
  return SetFunctionOracle(
      n, [base = std::move(base), div](const IndexSet& s) {
        return base(s) + eval_diversity(*div, s);
      });
}

}  // namespace detail

/// Oracle over a covariance model (the R^2 objective), optionally regularized
/// with a diversity term.
inline SetFunctionOracle make_oracle(
    CovarianceModel model, std::optional<DiversityFunction> diversity = {}) {
  model.validate();
  if (diversity) diversity->validate(model.n());
  auto shared = std::make_shared<const CovarianceModel>(std::move(model));
  const std::size_t n = shared->n();
  return detail::compose(
      n, [shared](const IndexSet& s) { return eval_r2(*shared, s); },
      std::move(diversity));
}

/// Oracle over a dataset for the chosen objective. A-optimality requires
/// AOptParams; the r2 kind derives a correlation model from the data. The
/// regression oracle precomputes the full Gram matrix so that per-query cost
/// is independent of the number of observations.
inline SetFunctionOracle make_oracle(
    ObjectiveKind kind, Dataset data, std::optional<AOptParams> aopt = {},
    std::optional<DiversityFunction> diversity = {}) {
  data.validate();
  const std::size_t n = data.n();
  if (diversity) diversity->validate(n);

  switch (kind) {
    case ObjectiveKind::kReg: {
      auto ctx = std::make_shared<const detail::RegContext>(
          detail::RegContext{data.features.transpose() * data.features,
                             data.features.transpose() * data.response});
      return detail::compose(
          n,
          [ctx](const IndexSet& s) { return detail::eval_reg_cached(*ctx, s); },
          std::move(diversity));
    }
    case ObjectiveKind::kR2:
      return make_oracle(make_covariance_model(data), std::move(diversity));
    case ObjectiveKind::kClass: {
      if (!data.binary_response()) {
        throw DataError("classification oracle requires a response in {0,1}");
      }
      auto shared = std::make_shared<const Dataset>(std::move(data));
      return detail::compose(
          n, [shared](const IndexSet& s) { return eval_class(*shared, s); },
          std::move(diversity));
    }
    case ObjectiveKind::kAOpt: {
      if (!aopt) {
        throw ConfigError("A-optimality oracle requires AOptParams");
      }
      aopt->validate();
      auto shared = std::make_shared<const Dataset>(std::move(data));
      const AOptParams params = *aopt;
      return detail::compose(
          n,
          [shared, params](const IndexSet& s) {
            return eval_aopt(*shared, s, params);
          },
          std::move(diversity));
    }
  }
  throw ConfigError("unknown objective kind");
}

}  // namespace subsel
