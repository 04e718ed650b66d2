#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "subsel/errors.hpp"
#include "subsel/index_set.hpp"

namespace subsel {

/// A dense design matrix (d observations by n candidate columns) together
/// with a length-d response. Columns are the selectable elements.
struct Dataset {
  Eigen::MatrixXd features;           // d x n
  Eigen::VectorXd response;           // length d
  std::vector<std::string> column_names;  // optional, size n when present

  std::size_t d() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(features.cols()); }

  void validate() const {
    if (features.rows() < 1 || features.cols() < 1) {
      throw DataError("dataset must have at least one row and one column");
    }
    if (response.size() != features.rows()) {
      throw DataError("response length " + std::to_string(response.size()) +
                      " does not match observation count " +
                      std::to_string(features.rows()));
    }
    if (!features.allFinite() || !response.allFinite()) {
      throw DataError("dataset contains non-finite entries");
    }
    if (!column_names.empty() &&
        column_names.size() != static_cast<std::size_t>(features.cols())) {
      throw DataError("column_names size does not match column count");
    }
  }

  bool binary_response() const {
    for (Eigen::Index i = 0; i < response.size(); ++i) {
      if (response[i] != 0.0 && response[i] != 1.0) return false;
    }
    return true;
  }

  /// Gathers the selected columns into a d x |S| matrix.
  Eigen::MatrixXd columns(const IndexSet& s) const {
    Eigen::MatrixXd out(features.rows(), static_cast<Eigen::Index>(s.size()));
    Eigen::Index j = 0;
    for (std::size_t col : s) {
      out.col(j++) = features.col(static_cast<Eigen::Index>(col));
    }
    return out;
  }
};

/// Rescales every column to mean 0 and (population) variance 1 in place.
/// Constant columns are left centered but unscaled.
inline void standardize_columns(Eigen::MatrixXd& m) {
  const double d = static_cast<double>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    auto col = m.col(j);
    col.array() -= col.mean();
    const double sd = std::sqrt(col.squaredNorm() / d);
    if (sd > 0.0) col /= sd;
  }
}

/// True when every column has mean within `mean_tol` of 0 and variance
/// within `var_tol` of 1.
inline bool columns_standardized(const Eigen::MatrixXd& m,
                                 double mean_tol = 1e-6,
                                 double var_tol = 1e-6) {
  const double d = static_cast<double>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    if (std::abs(mean) > mean_tol) return false;
    const double var = (m.col(j).array() - mean).square().sum() / d;
    if (std::abs(var - 1.0) > var_tol) return false;
  }
  return true;
}

}  // namespace subsel
