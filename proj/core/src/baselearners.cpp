// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/baselearners.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

void check_spec(const BaseLearnerSpec& spec) {
  if (spec.kind == LearnerKind::pspline) {
    const auto& ps = spec.pspline;
    if (ps.degree < 1) throw InvalidInputError("pspline degree must be >= 1");
    if (ps.penalty_order < 1 || ps.penalty_order > ps.degree) {
      throw InvalidInputError("pspline penalty order must lie in [1, degree]");
    }
    if (!(ps.target_df > ps.penalty_order)) {
      throw InvalidInputError("pspline target_df must exceed the penalty order");
    }
    if (ps.interior_knots < ps.penalty_order + 1) {
      throw InvalidInputError("pspline needs at least penalty_order + 1 interior knots");
    }
  }
  if (spec.kind != LearnerKind::intercept && spec.covariate < 0) {
    throw InvalidInputError("base-learner needs a covariate index");
  }
}

// D'D for the difference penalty of the given order on n coefficients.
Eigen::MatrixXd difference_penalty(int n, int order) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
  for (int q = 0; q < order; ++q) {
    const auto rows = D.rows() - 1;
    Eigen::MatrixXd Dn(rows, n);
    Dn = D.bottomRows(rows) - D.topRows(rows);
    D = std::move(Dn);
  }
  return D.transpose() * D;
}

}  // namespace

// Evaluation buffers are caller-provided; degree is capped so predictions
// can run allocation-free.
static constexpr int kMaxDegree = 15;

int pspline_basis_row(double x, double a, double b, int interior_knots, int degree,
                      double* values) {
  const int m = interior_knots;
  const int d = degree;
  const double h = (b - a) / (m + 1);
  double xc = std::clamp(x, a, b);
  int cell = static_cast<int>(std::floor((xc - a) / h));
  cell = std::clamp(cell, 0, m);
  // knot(j) = a + (j - d) * h; span index i satisfies knot(i) <= x < knot(i+1)
  const int span = d + cell;
  const auto knot = [&](int j) { return a + (j - d) * h; };

  values[0] = 1.0;
  double left[kMaxDegree + 1], right[kMaxDegree + 1];
  for (int j = 1; j <= d; ++j) {
    left[j] = xc - knot(span + 1 - j);
    right[j] = knot(span + j) - xc;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = values[r] / (right[r + 1] + left[j - r]);
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
  return cell;  // first non-zero basis index
}

PreparedLearner::PreparedLearner(const BaseLearnerSpec& spec, const Eigen::VectorXd& x)
    : spec_(spec), x_(x) {
  check_spec(spec_);
  const auto T = x.size();
  if (T < 2) throw InvalidInputError("base-learner needs at least 2 observations");

  if (spec_.kind == LearnerKind::intercept) {
    effective_df_ = 1.0;
    return;
  }

  x_min_ = x.minCoeff();
  x_max_ = x.maxCoeff();
  if (!(x_max_ > x_min_)) {
    throw DegenerateLearnerError("covariate " + std::to_string(spec_.covariate + 1) +
                                 " is constant");
  }

  if (spec_.kind == LearnerKind::linear) {
    x_mean_ = x.mean();
    sxx_ = (x.array() - x_mean_).square().sum();
    if (!(sxx_ > 0.0)) {
      throw DegenerateLearnerError("covariate " + std::to_string(spec_.covariate + 1) +
                                   " has zero variance");
    }
    effective_df_ = 2.0;
    return;
  }

  // pspline
  const auto& ps = spec_.pspline;
  const int d = ps.degree;
  if (d > kMaxDegree) throw InvalidInputError("pspline degree too large");
  n_basis_ = ps.interior_knots + d + 1;

  basis_values_.resize(T, d + 1);
  basis_first_.resize(static_cast<size_t>(T));
  Eigen::MatrixXd btb = Eigen::MatrixXd::Zero(n_basis_, n_basis_);
  double row[kMaxDegree + 1];
  for (Eigen::Index t = 0; t < T; ++t) {
    const int first = pspline_basis_row(x(t), x_min_, x_max_, ps.interior_knots, d, row);
    basis_first_[static_cast<size_t>(t)] = first;
    for (int p = 0; p <= d; ++p) {
      basis_values_(t, p) = row[p];
      for (int q = 0; q <= d; ++q) {
        btb(first + p, first + q) += row[p] * row[q];
      }
    }
  }
  const Eigen::MatrixXd dtd = difference_penalty(n_basis_, ps.penalty_order);

  const auto df_at = [&](double lambda) {
    Eigen::MatrixXd A = btb + lambda * dtd;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) return -1.0;
    return llt.solve(btb).trace();
  };

  // trace(hat) is strictly decreasing in lambda; bisect log10(lambda) on
  // [-8, 8] until the trace matches target_df to 1e-6
  double lo = -8.0, hi = 8.0;
  const double df_lo = df_at(std::pow(10.0, lo));
  const double df_hi = df_at(std::pow(10.0, hi));
  if (df_lo < ps.target_df || df_hi > ps.target_df || df_lo < 0.0 || df_hi < 0.0) {
    throw DegenerateLearnerError("covariate " + std::to_string(spec_.covariate + 1) +
                                 ": target_df " + std::to_string(ps.target_df) +
                                 " unreachable on the smoothing bracket");
  }
  double mid = 0.0, df_mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    df_mid = df_at(std::pow(10.0, mid));
    if (std::abs(df_mid - ps.target_df) <= 1e-6) break;
    if (df_mid > ps.target_df) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  lambda_ = std::pow(10.0, mid);
  effective_df_ = df_mid;
  chol_.compute(btb + lambda_ * dtd);
  if (chol_.info() != Eigen::Success) {
    throw DegenerateLearnerError("pspline normal equations not positive definite");
  }
}

BaseLearnerFit PreparedLearner::fit(const Eigen::VectorXd& g) const {
  const auto T = x_.size();
  if (g.size() != T && spec_.kind != LearnerKind::intercept) {
    throw InvalidInputError("gradient length does not match the design");
  }
  BaseLearnerFit out;
  out.spec = spec_;
  out.x_min = x_min_;
  out.x_max = x_max_;

  switch (spec_.kind) {
    case LearnerKind::intercept: {
      const double m = g.mean();
      out.coef.resize(1);
      out.coef(0) = m;
      out.rss = (g.array() - m).square().sum();
      return out;
    }
    case LearnerKind::linear: {
      const double g_mean = g.mean();
      double sxy = 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        sxy += (x_(t) - x_mean_) * (g(t) - g_mean);
      }
      const double slope = sxy / sxx_;
      const double intercept = g_mean - slope * x_mean_;
      out.coef.resize(2);
      out.coef << intercept, slope;
      double rss = 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        const double r = g(t) - (intercept + slope * x_(t));
        rss += r * r;
      }
      out.rss = rss;
      return out;
    }
    case LearnerKind::pspline: {
      const int d = spec_.pspline.degree;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_basis_);
      for (Eigen::Index t = 0; t < T; ++t) {
        const int first = basis_first_[static_cast<size_t>(t)];
        for (int p = 0; p <= d; ++p) rhs(first + p) += basis_values_(t, p) * g(t);
      }
      out.coef = chol_.solve(rhs);
      double rss = 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        const int first = basis_first_[static_cast<size_t>(t)];
        double fitted = 0.0;
        for (int p = 0; p <= d; ++p) fitted += basis_values_(t, p) * out.coef(first + p);
        const double r = g(t) - fitted;
        rss += r * r;
      }
      out.rss = rss;
      return out;
    }
  }
  throw InvalidInputError("unknown base-learner kind");
}

BaseLearnerFit fit_learner(const BaseLearnerSpec& spec, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& g) {
  return PreparedLearner(spec, x).fit(g);
}

double effective_df(const BaseLearnerSpec& spec, const Eigen::VectorXd& x) {
  return PreparedLearner(spec, x).effective_df();
}

double predict_one(const BaseLearnerFit& fit, double x_new) {
  switch (fit.spec.kind) {
    case LearnerKind::intercept:
      return fit.coef(0);
    case LearnerKind::linear:
      return fit.coef(0) + fit.coef(1) * x_new;
    case LearnerKind::pspline: {
      const int d = fit.spec.pspline.degree;
      double values[kMaxDegree + 1];
      const int first =
          pspline_basis_row(x_new, fit.x_min, fit.x_max, fit.spec.pspline.interior_knots, d, values);
      double out = 0.0;
      for (int p = 0; p <= d; ++p) out += values[p] * fit.coef(first + p);
      return out;
    }
  }
  throw InvalidInputError("unknown base-learner kind");
}

Eigen::VectorXd predict(const BaseLearnerFit& fit, const Eigen::VectorXd& x_new) {
  Eigen::VectorXd out(x_new.size());
  for (Eigen::Index t = 0; t < x_new.size(); ++t) out(t) = predict_one(fit, x_new(t));
  return out;
}

}  // namespace msboost
