// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_EM_HPP
#define MSBOOST_EM_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "msboost/boosting.hpp"
#include "msboost/dataset.hpp"
#include "msboost/families.hpp"
#include "msboost/hmm.hpp"

namespace msboost {

struct FitDiagnostics {
  std::vector<double> loglik_trace;  // observed-data log-likelihood per EM iteration
  std::vector<double> cdll_trace;    // complete-data log-likelihood per EM iteration
  int iterations = 0;
  bool converged = false;
};

/// Per-parameter base-learner choice of a fit configuration. kind ==
/// intercept means a single intercept-only candidate; linear and pspline
/// expand to one candidate per covariate.
struct LearnerConfig {
  LearnerKind kind = LearnerKind::linear;
  PsplineParams pspline;
};

struct FitConfig {
  int n_states = 2;
  std::string family = "normal";
  std::vector<LearnerConfig> learners;  // one per distribution parameter

  // Total boosting budget per state. Each M-step consumes up to `em_chunk`
  // iterations of it; once the budget is spent the EM keeps updating the
  // state process with frozen predictors until the tolerance fires. The
  // budget (not the per-sweep chunk) is what cross-validation tunes: it
  // controls variable selection and smoothness. In exact-paper mode every
  // M-step runs the full n_stop instead.
  std::vector<int> n_stop;  // one per state
  int em_chunk = 50;

  double step_length = 0.1;
  bool stationary = false;
  double tolerance = 1e-6;  // relative observed log-likelihood change
  int max_em_iterations = 100;
  unsigned long long seed = 1;

  // Exact-paper mode: no non-increase rejection rule, and n_stop boosting
  // iterations in every M-step rather than in total.
  bool exact_paper = false;

  // Multi-start initialization (N >= 2 only): the quantile-slice start and
  // n_restarts random contiguous-block state assignments each train on
  // their own hard assignment first, continue in classification-EM flavour
  // with a held-out probe subset masked, and are scored by the likelihood
  // the forward algorithm attributes to the probe points. The winner's
  // posterior weights warm-start the reported soft-EM fit on the full
  // data. Deterministic given `seed`. Needed because regimes that differ
  // in shape rather than level leave the response quantiles uninformative,
  // and in-sample likelihood cannot arbitrate between a spurious level
  // split and the persistent-regime structure.
  int n_restarts = 8;
  double probe_fraction = 0.15;

  void validate() const;
  BoostConfig boost_config(int state) const;
};

struct FittedModel {
  std::string family_name;
  std::shared_ptr<const ResponseFamily> family;
  StateModel state_model;
  std::vector<std::vector<PredictorEnsemble>> ensembles;  // [state][param]
  FitDiagnostics diagnostics;

  int n_states() const { return state_model.n_states(); }
  int n_params() const { return family->param_count(); }

  /// theta_{tk}^{(i)} = g_k^{-1}(eta_k^{(i)}(x_t)) for every state, time
  /// point and parameter; one T x K matrix per state.
  std::vector<Eigen::MatrixXd> predict_parameters(const Eigen::MatrixXd& X) const;

  /// T x N table of state-dependent log-densities for a dataset.
  LogDensityTable log_density_table(const Dataset& data) const;

  /// Mean dwell time implied by the fit: 1 / (1 - gamma_ii).
  double mean_dwell_time(int state) const;
};

/// The three CDLL summands evaluated at the supplied weights and
/// parameters. Terms with weight exactly 0 contribute 0 even when the
/// corresponding log is -inf.
double complete_data_loglik(const Dataset& data, const ResponseFamily& family,
                            const StateModel& model,
                            const std::vector<std::vector<PredictorEnsemble>>& ensembles,
                            const PosteriorWeights& weights);

/// Observed-data log-likelihood of a fitted model on a dataset; rows where
/// mask is false contribute the identity (density 1) to the recursion.
double observed_loglik(const FittedModel& model, const Dataset& data,
                       const std::vector<bool>* mask = nullptr);

/// Fits an MS-GAMLSS by alternating E-steps (forward/backward posterior
/// weights) and M-steps (closed-form delta/gamma updates plus per-state
/// boosting). Rows where mask is false are treated as missing: their
/// density row is the identity in the recursions and their boosting weight
/// is zero. `shared_learners` may carry learner sets prepared earlier for
/// the same covariate matrix (they depend only on X).
FittedModel fit(const Dataset& data, const FitConfig& config,
                const std::vector<bool>* mask = nullptr,
                const std::vector<LearnerSet>* shared_learners = nullptr);

/// Relabels states by increasing offset of parameter 0, permuting gamma,
/// delta and the ensemble grid consistently. Pure relabeling; the
/// likelihood is invariant.
void relabel_states(FittedModel& model);

/// Expands per-parameter learner configurations into concrete candidate
/// specs: one per covariate for linear/pspline, a single candidate for
/// intercept-only.
std::vector<std::vector<BaseLearnerSpec>> expand_learner_specs(
    const std::vector<LearnerConfig>& learners, Eigen::Index n_covariates);

}  // namespace msboost

#endif  // MSBOOST_EM_HPP
