// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_BASELEARNERS_HPP
#define MSBOOST_BASELEARNERS_HPP

#include <Eigen/Dense>
#include <vector>

namespace msboost {

enum class LearnerKind { intercept, linear, pspline };

struct PsplineParams {
  int degree = 3;
  int interior_knots = 20;  // equidistant over the observed covariate range
  int penalty_order = 2;
  double target_df = 4.0;
};

struct BaseLearnerSpec {
  LearnerKind kind = LearnerKind::intercept;
  int covariate = -1;  // 0-based column index; -1 for intercept-only
  PsplineParams pspline;
};

/// A fitted base-learner. Prediction is an affine function of `coef`:
/// intercept-only stores the mean (length 1), linear stores (intercept,
/// slope), pspline stores one coefficient per B-spline basis function
/// (interior_knots + degree + 1). For psplines, x_min/x_max pin the knot
/// grid; predictions outside that range are clamped to the boundary.
struct BaseLearnerFit {
  BaseLearnerSpec spec;
  Eigen::VectorXd coef;
  double rss = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

/// Design-dependent state of one base-learner: basis, penalty and the
/// smoothing parameter calibrated once per covariate vector (the hat matrix
/// depends only on x, not on the gradient being fitted). Immutable after
/// construction; fit() is pure and safe to call concurrently.
class PreparedLearner {
public:
  // Throws DegenerateLearnerError for designs the learner cannot handle
  // (constant covariate; pspline target_df unreachable on the bracket).
  PreparedLearner(const BaseLearnerSpec& spec, const Eigen::VectorXd& x);

  BaseLearnerFit fit(const Eigen::VectorXd& g) const;
  double effective_df() const { return effective_df_; }
  /// Solved smoothing parameter (0 for intercept/linear learners).
  double lambda() const { return lambda_; }
  const BaseLearnerSpec& spec() const { return spec_; }

private:
  BaseLearnerSpec spec_;
  Eigen::VectorXd x_;
  double x_min_ = 0.0, x_max_ = 0.0;
  double effective_df_ = 0.0;

  // linear: centered sums
  double x_mean_ = 0.0, sxx_ = 0.0;

  // pspline: sparse basis rows (degree+1 consecutive entries each), solved
  // smoothing parameter and the Cholesky factor of B'B + lambda D'D
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      basis_values_;                   // T x (degree+1)
  std::vector<int> basis_first_;       // first basis index per row
  double lambda_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  int n_basis_ = 0;

  friend Eigen::VectorXd predict(const BaseLearnerFit&, const Eigen::VectorXd&);
};

/// One-shot fit: prepare the design for x and fit g.
BaseLearnerFit fit_learner(const BaseLearnerSpec& spec, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& g);

/// Effective degrees of freedom of the (penalized) fit on design x: 1 for
/// intercept-only, 2 for linear, trace of the pspline hat matrix at the
/// solved smoothing parameter.
double effective_df(const BaseLearnerSpec& spec, const Eigen::VectorXd& x);

/// Deterministic evaluation of a fitted base-learner at new covariate values.
Eigen::VectorXd predict(const BaseLearnerFit& fit, const Eigen::VectorXd& x_new);
double predict_one(const BaseLearnerFit& fit, double x_new);

/// B-spline basis row at x for an equidistant P-spline grid on [a, b]:
/// writes the degree+1 non-zero basis values into `values` and returns the
/// first basis index. Exposed for tests.
int pspline_basis_row(double x, double a, double b, int interior_knots, int degree,
                      double* values);

}  // namespace msboost

#endif  // MSBOOST_BASELEARNERS_HPP
