// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_BOOSTING_HPP
#define MSBOOST_BOOSTING_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "msboost/baselearners.hpp"
#include "msboost/dataset.hpp"
#include "msboost/families.hpp"

namespace msboost {

struct EnsembleUpdate {
  BaseLearnerFit fit;
  double step_length;
};

/// Additive predictor of one state x parameter cell: an offset plus the
/// ordered list of committed, step-length-scaled base-learner fits.
/// evaluate() accumulates the updates in commit order starting from the
/// offset, which reproduces the training-time predictor exactly.
struct PredictorEnsemble {
  int state = 0;  // 0-based
  int param = 0;  // 0-based
  double offset = 0.0;
  std::vector<EnsembleUpdate> updates;

  Eigen::VectorXd evaluate(const Eigen::MatrixXd& X) const;
  double evaluate_one(const Eigen::RowVectorXd& x) const;

  bool uses_covariate(int j) const;
  /// #updates referencing covariate j / #updates (0 if no updates).
  double selection_frequency(int j) const;
  /// Aggregate (intercept, slope per covariate) when every update is linear
  /// or intercept-only; nullopt otherwise. Offset included in the intercept.
  std::optional<Eigen::VectorXd> linear_coefficients(int n_covariates) const;
};

struct BoostConfig {
  int n_stop = 100;          // boosting iterations for one M-step
  double step_length = 0.1;  // in (0, 1)
  // Stop the inner loop when the best candidate update would strictly
  // decrease the weighted log-likelihood. Disabled in exact-paper mode.
  bool reject_nonimproving = true;
};

/// Candidate base-learners of one distribution parameter, prepared once per
/// covariate design and shared by every state and EM iteration.
struct LearnerSet {
  std::vector<std::shared_ptr<const PreparedLearner>> learners;
};

/// Prepares one LearnerSet per distribution parameter from per-parameter
/// specs. Degenerate candidates are dropped with a note in `dropped`.
std::vector<LearnerSet> prepare_learners(
    const std::vector<std::vector<BaseLearnerSpec>>& specs_per_param,
    const Eigen::MatrixXd& X, std::vector<std::string>* dropped = nullptr);

/// T x K table of weighted CDLL gradients: entry (t, k) =
/// w(t) * d log f_Y(y_t; theta_t) / d eta_k, theta from the current
/// predictors.
Eigen::MatrixXd weighted_gradients(const ResponseFamily& family,
                                   const Eigen::VectorXd& y,
                                   const std::vector<Eigen::VectorXd>& eta,
                                   const Eigen::VectorXd& w);

/// argmin RSS over candidate fits; ties broken toward the lowest covariate
/// index. Throws NoCandidateError on an empty candidate list.
int select_within_parameter(const std::vector<BaseLearnerFit>& candidates);

/// Provisional-update selection across parameters: for each parameter with
/// a winning fit, the weighted log-likelihood is evaluated with only that
/// predictor updated by sl * prediction; returns the argmax (ties toward
/// the lowest parameter index).
int select_across_parameters(const ResponseFamily& family,
                             const Eigen::VectorXd& y,
                             const Eigen::VectorXd& w,
                             const std::vector<Eigen::VectorXd>& eta,
                             const std::vector<std::optional<Eigen::VectorXd>>& predictions,
                             double step_length);

/// Weighted log-likelihood sum_t w(t) log f_Y(y_t; theta_t(eta)).
double weighted_loglik(const ResponseFamily& family, const Eigen::VectorXd& y,
                       const std::vector<Eigen::VectorXd>& eta,
                       const Eigen::VectorXd& w);

/// The non-cyclical boosting inner cycle for one state: runs cfg.n_stop
/// iterations of gradient fitting, RSS selection within each parameter,
/// weighted log-likelihood selection across parameters and a step-length
/// update of the winning predictor. `ensembles` and `eta` (one ensemble and
/// one length-T predictor vector per parameter) are updated in place and
/// stay mutually consistent. Returns the number of committed updates.
int boost_state(const ResponseFamily& family, const Dataset& data,
                const Eigen::VectorXd& w, const std::vector<LearnerSet>& learners,
                const BoostConfig& cfg, std::vector<PredictorEnsemble>& ensembles,
                std::vector<Eigen::VectorXd>& eta);

}  // namespace msboost

#endif  // MSBOOST_BOOSTING_HPP
