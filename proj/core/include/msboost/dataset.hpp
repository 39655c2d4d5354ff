// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_DATASET_HPP
#define MSBOOST_DATASET_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace msboost {

/// A time-ordered regression dataset: response y_1..y_T plus a T x P
/// covariate matrix. Row order is time order.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> covariate_names;  // size P, may be empty

  Eigen::Index T() const { return y.size(); }
  Eigen::Index P() const { return X.cols(); }

  // Throws InvalidInputError on shape mismatch, T < 2 or non-finite cells.
  void validate() const;
};

/// Strict CSV reader for the layout used throughout: header row, first
/// column is the response, remaining columns are covariates, comma
/// separated, decimal point, no missing values. Errors name the offending
/// row and column (1-based, header is row 1).
Dataset read_dataset_csv(const std::string& path);

}  // namespace msboost

#endif  // MSBOOST_DATASET_HPP
