// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_HMM_HPP
#define MSBOOST_HMM_HPP

#include <Eigen/Dense>
#include <vector>

namespace msboost {

/// Parameters of the hidden state process: transition matrix, initial
/// distribution and a flag marking the initial distribution as stationary.
struct StateModel {
  Eigen::MatrixXd gamma;  // N x N, row-stochastic
  Eigen::VectorXd delta;  // length N
  bool stationary = false;

  int n_states() const { return static_cast<int>(delta.size()); }

  // Row sums of gamma and the sum of delta must be 1 within 1e-12, all
  // entries nonnegative; if the stationary flag is set, delta * gamma must
  // equal delta within 1e-10 componentwise. Throws InvalidInputError.
  void validate() const;
};

/// T x N table with entry (t, i) = log f_Y(y_t; theta_t^{(i)}).
using LogDensityTable = Eigen::MatrixXd;

/// Smoothed state probabilities u[t](i) = P(S_t = i | y_1..y_T) and pairwise
/// probabilities v[s](i, j) = P(S_{t-1} = i, S_t = j | y_1..y_T) where slot s
/// holds transition time t = s + 1 (0-based), i.e. there are T-1 slots.
struct PosteriorWeights {
  Eigen::MatrixXd u;               // T x N
  std::vector<Eigen::MatrixXd> v;  // T-1 matrices, each N x N

  Eigen::Index T() const { return u.rows(); }
  int n_states() const { return static_cast<int>(u.cols()); }
};

struct ForwardResult {
  double log_likelihood;
  Eigen::MatrixXd log_alpha;  // T x N
};

/// log(sum(exp(x))) with the usual max shift; returns -inf for empty or
/// all -inf input.
double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Solves delta * gamma = delta, sum(delta) = 1 via the augmented linear
/// system. Throws DegeneracyError if gamma is reducible/degenerate.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& gamma);

/// Log-space forward recursion; log_alpha(t, i) = log f(y_1..y_t, S_t = i).
ForwardResult forward(const LogDensityTable& logdens, const StateModel& model);

/// Log-space backward recursion; log_beta(T-1, .) = 0.
Eigen::MatrixXd backward(const LogDensityTable& logdens, const StateModel& model);

/// Conditional expectations of the state indicators given all observations.
PosteriorWeights posteriors(const Eigen::MatrixXd& log_alpha,
                            const Eigen::MatrixXd& log_beta,
                            const LogDensityTable& logdens,
                            const StateModel& model);

/// Closed-form M-step update of the initial distribution: delta_i = u[0](i).
Eigen::VectorXd update_initial(const PosteriorWeights& weights);

/// Closed-form M-step update of the transition matrix. Throws
/// DegeneracyError (naming the state) if a row has zero total mass.
Eigen::MatrixXd update_transitions(const PosteriorWeights& weights);

/// Local decoding: per-time-point argmax of the smoothed probabilities,
/// ties broken toward the lowest state index. States are 0-based.
std::vector<int> decode_local(const PosteriorWeights& weights);

}  // namespace msboost

#endif  // MSBOOST_HMM_HPP
