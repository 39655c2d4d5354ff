// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/hmm.hpp"

#include <cmath>
#include <limits>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd log_matrix(const Eigen::MatrixXd& m) {
  return m.array().log().matrix();  // log(0) = -inf is fine downstream
}

}  // namespace

void StateModel::validate() const {
  const int N = n_states();
  if (N < 1) throw InvalidInputError("state model needs at least one state");
  if (gamma.rows() != N || gamma.cols() != N) {
    throw InvalidInputError("transition matrix must be N x N");
  }
  for (int i = 0; i < N; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (gamma(i, j) < 0.0) throw InvalidInputError("negative transition probability");
      row_sum += gamma(i, j);
    }
    if (std::abs(row_sum - 1.0) > 1e-12) {
      throw InvalidInputError("transition matrix row " + std::to_string(i + 1) +
                              " sums to " + std::to_string(row_sum));
    }
  }
  double delta_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    if (delta(i) < 0.0) throw InvalidInputError("negative initial probability");
    delta_sum += delta(i);
  }
  if (std::abs(delta_sum - 1.0) > 1e-12) {
    throw InvalidInputError("initial distribution sums to " + std::to_string(delta_sum));
  }
  if (stationary) {
    Eigen::VectorXd lhs = gamma.transpose() * delta;
    for (int i = 0; i < N; ++i) {
      if (std::abs(lhs(i) - delta(i)) > 1e-10) {
        throw InvalidInputError("initial distribution is flagged stationary but delta*gamma != delta");
      }
    }
  }
}

double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) return kNegInf;
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a +inf/nan propagates)
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::exp(x(i) - m);
  return m + std::log(s);
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& gamma) {
  const auto N = gamma.rows();
  if (N != gamma.cols() || N < 1) throw InvalidInputError("transition matrix must be square");
  // delta (I - Gamma + U) = 1 with U the all-ones matrix.
  Eigen::MatrixXd A =
      (Eigen::MatrixXd::Identity(N, N) - gamma + Eigen::MatrixXd::Ones(N, N)).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw DegeneracyError("stationary distribution undefined: transition matrix is reducible");
  }
  Eigen::VectorXd delta = lu.solve(Eigen::VectorXd::Ones(N));
  if ((A * delta - Eigen::VectorXd::Ones(N)).lpNorm<Eigen::Infinity>() > 1e-8) {
    throw DegeneracyError("stationary distribution solve failed");
  }
  for (Eigen::Index i = 0; i < N; ++i) {
    if (delta(i) < -1e-10) {
      throw DegeneracyError("stationary distribution has a negative component");
    }
    delta(i) = std::max(delta(i), 0.0);
  }
  delta /= delta.sum();
  return delta;
}

ForwardResult forward(const LogDensityTable& logdens, const StateModel& model) {
  const auto T = logdens.rows();
  const int N = model.n_states();
  if (logdens.cols() != N) throw InvalidInputError("log-density table width != state count");
  if (T < 1) throw InvalidInputError("empty log-density table");

  const Eigen::MatrixXd log_gamma = log_matrix(model.gamma);
  Eigen::MatrixXd log_alpha(T, N);
  for (int i = 0; i < N; ++i) {
    log_alpha(0, i) = std::log(model.delta(i)) + logdens(0, i);
  }
  Eigen::VectorXd work(N);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (int j = 0; j < N; ++j) {
      for (int i = 0; i < N; ++i) work(i) = log_alpha(t - 1, i) + log_gamma(i, j);
      log_alpha(t, j) = logsumexp(work) + logdens(t, j);
    }
  }
  ForwardResult res;
  res.log_alpha = std::move(log_alpha);
  res.log_likelihood = logsumexp(res.log_alpha.row(T - 1).transpose());
  return res;
}

Eigen::MatrixXd backward(const LogDensityTable& logdens, const StateModel& model) {
  const auto T = logdens.rows();
  const int N = model.n_states();
  if (logdens.cols() != N) throw InvalidInputError("log-density table width != state count");

  const Eigen::MatrixXd log_gamma = log_matrix(model.gamma);
  Eigen::MatrixXd log_beta(T, N);
  log_beta.row(T - 1).setZero();
  Eigen::VectorXd work(N);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        work(j) = log_gamma(i, j) + logdens(t + 1, j) + log_beta(t + 1, j);
      }
      log_beta(t, i) = logsumexp(work);
    }
  }
  return log_beta;
}

PosteriorWeights posteriors(const Eigen::MatrixXd& log_alpha, const Eigen::MatrixXd& log_beta,
                            const LogDensityTable& logdens, const StateModel& model) {
  const auto T = log_alpha.rows();
  const int N = model.n_states();
  const double loglik = logsumexp(log_alpha.row(T - 1).transpose());
  const Eigen::MatrixXd log_gamma = log_matrix(model.gamma);

  PosteriorWeights w;
  w.u.resize(T, N);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      w.u(t, i) = std::exp(log_alpha(t, i) + log_beta(t, i) - loglik);
    }
    // guard against residual rounding so each row is an exact distribution
    const double s = w.u.row(t).sum();
    if (s > 0.0) w.u.row(t) /= s;
  }
  w.v.resize(static_cast<size_t>(T - 1));
  for (Eigen::Index t = 1; t < T; ++t) {
    Eigen::MatrixXd vt(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        vt(i, j) = std::exp(log_alpha(t - 1, i) + log_gamma(i, j) + logdens(t, j) +
                            log_beta(t, j) - loglik);
      }
    }
    w.v[static_cast<size_t>(t - 1)] = std::move(vt);
  }
  return w;
}

Eigen::VectorXd update_initial(const PosteriorWeights& weights) {
  Eigen::VectorXd delta = weights.u.row(0).transpose();
  delta /= delta.sum();
  return delta;
}

Eigen::MatrixXd update_transitions(const PosteriorWeights& weights) {
  const int N = weights.n_states();
  if (weights.v.empty()) throw InvalidInputError("transition update needs T >= 2");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(N, N);
  for (const auto& vt : weights.v) total += vt;
  Eigen::MatrixXd gamma(N, N);
  for (int i = 0; i < N; ++i) {
    const double row_sum = total.row(i).sum();
    if (row_sum <= 0.0) {
      throw DegeneracyError("transition update degenerate: state " + std::to_string(i + 1) +
                            " has no posterior mass");
    }
    gamma.row(i) = total.row(i) / row_sum;
  }
  return gamma;
}

std::vector<int> decode_local(const PosteriorWeights& weights) {
  const auto T = weights.T();
  const int N = weights.n_states();
  std::vector<int> states(static_cast<size_t>(T), 0);
  for (Eigen::Index t = 0; t < T; ++t) {
    int best = 0;
    for (int i = 1; i < N; ++i) {
      if (weights.u(t, i) > weights.u(t, best)) best = i;
    }
    states[static_cast<size_t>(t)] = best;
  }
  return states;
}

}  // namespace msboost
