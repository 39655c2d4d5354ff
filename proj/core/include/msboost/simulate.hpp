// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_SIMULATE_HPP
#define MSBOOST_SIMULATE_HPP

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "msboost/dataset.hpp"
#include "msboost/em.hpp"

namespace msboost {

/// A data-generating design: state process, true predictor functions per
/// state x parameter, covariate law uniform(-1, 1) i.i.d.
struct ExperimentDesign {
  std::string name;  // "linear-nbinom", "nonlinear-normal" or "custom"
  int T = 500;
  int N = 2;
  int P = 100;
  Eigen::MatrixXd gamma;
  Eigen::VectorXd delta;
  std::string family = "normal";
  // eta_true[i][k](x_row) is the true predictor of state i, parameter k.
  std::vector<std::vector<std::function<double(const Eigen::RowVectorXd&)>>> eta_true;
  std::vector<int> informative;  // 0-based covariate indices carrying signal

  void validate() const;
};

/// The two study designs: 2-state chains with off-diagonal entries 0.05,
/// uniform initial distribution, T=500, P=100 with one informative
/// covariate. linear_nbinom uses log-linear negative-binomial predictors
/// (+-2 x_1 effects); nonlinear_normal uses sine effects under a normal
/// response.
ExperimentDesign linear_nbinom_design();
ExperimentDesign nonlinear_normal_design();

/// s_0 ~ delta, s_{t+1} ~ gamma row s_t. Deterministic given the rng state.
std::vector<int> simulate_chain(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& delta,
                                int T, std::mt19937_64& rng);
std::vector<int> simulate_chain(int N, const Eigen::MatrixXd& gamma,
                                const Eigen::VectorXd& delta, int T,
                                unsigned long long seed);

Eigen::MatrixXd simulate_covariates(int T, int P, std::mt19937_64& rng);

/// y_t drawn from the design family with theta_k = g_k^{-1}(eta_k^{(s_t)}(x_t)).
Eigen::VectorXd simulate_response(const ExperimentDesign& design,
                                  const std::vector<int>& states,
                                  const Eigen::MatrixXd& X, std::mt19937_64& rng);
Eigen::VectorXd simulate_response(const ExperimentDesign& design,
                                  const std::vector<int>& states,
                                  const Eigen::MatrixXd& X, unsigned long long seed);

/// One simulated dataset (covariates, chain, response) for replication r of
/// a seeded experiment.
Dataset simulate_dataset(const ExperimentDesign& design, unsigned long long seed,
                         int replication, std::vector<int>* states_out = nullptr);

struct RunRecord {
  int replication = 0;
  bool ok = false;
  std::string error;
  Eigen::MatrixXd gamma_hat;
  // selected[i][k][j] = covariate j appears in >= 1 committed update of
  // ensemble (state i, parameter k)
  std::vector<std::vector<std::vector<bool>>> selected;
  std::vector<int> n_stop_used;  // per state (CV choice or fixed)
};

struct ReplicationReport {
  std::string design_name;
  std::vector<RunRecord> runs;  // one per replication, failures included
  int failures = 0;

  // Aggregates over successful runs.
  Eigen::MatrixXd gamma_mean;
  Eigen::MatrixXd gamma_sd;
  std::vector<double> informative_rate_per_param;
  std::vector<double> noise_rate_per_param;
  double informative_rate = 0.0;
  double noise_rate = 0.0;

  void aggregate(const ExperimentDesign& design);
};

struct ExperimentConfig {
  FitConfig fit;
  int replications = 100;
  unsigned long long seed = 1;
  int workers = 1;
  // Cross-validate n_stop inside each replication instead of using the
  // fixed values in fit.n_stop.
  bool cv_inside = false;
  std::vector<std::vector<int>> cv_grid;
  int cv_folds = 20;
  // When non-empty, each replication's fitted model is written to
  // <save_dir>/model_rep<r>.json.
  std::string save_dir;
};

/// Runs the full replication loop: simulate, fit, relabel, record. A
/// replication whose fit throws is recorded and excluded from aggregates;
/// more than 20 % failures aborts with a DegeneracyError.
ReplicationReport run_experiment(const ExperimentDesign& design,
                                 const ExperimentConfig& config);

}  // namespace msboost

#endif  // MSBOOST_SIMULATE_HPP
