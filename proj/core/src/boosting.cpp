// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/boosting.hpp"

#include <cmath>
#include <limits>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Prediction vector of a fitted base-learner at the training covariates.
Eigen::VectorXd training_prediction(const BaseLearnerFit& fit, const Eigen::MatrixXd& X) {
  if (fit.spec.kind == LearnerKind::intercept) {
    return Eigen::VectorXd::Constant(X.rows(), fit.coef(0));
  }
  return predict(fit, X.col(fit.spec.covariate));
}

// rss argmin with ties broken toward the lowest covariate index.
bool fit_beats(const BaseLearnerFit& challenger, const BaseLearnerFit& incumbent) {
  if (challenger.rss < incumbent.rss) return true;
  return challenger.rss == incumbent.rss && challenger.spec.covariate < incumbent.spec.covariate;
}

}  // namespace

Eigen::VectorXd PredictorEnsemble::evaluate(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), offset);
  for (const auto& u : updates) {
    for (Eigen::Index t = 0; t < X.rows(); ++t) {
      const double x = u.fit.spec.kind == LearnerKind::intercept ? 0.0 : X(t, u.fit.spec.covariate);
      out(t) += u.step_length * predict_one(u.fit, x);
    }
  }
  return out;
}

double PredictorEnsemble::evaluate_one(const Eigen::RowVectorXd& x) const {
  double out = offset;
  for (const auto& u : updates) {
    const double xv = u.fit.spec.kind == LearnerKind::intercept ? 0.0 : x(u.fit.spec.covariate);
    out += u.step_length * predict_one(u.fit, xv);
  }
  return out;
}

bool PredictorEnsemble::uses_covariate(int j) const {
  for (const auto& u : updates) {
    if (u.fit.spec.covariate == j) return true;
  }
  return false;
}

double PredictorEnsemble::selection_frequency(int j) const {
  if (updates.empty()) return 0.0;
  int n = 0;
  for (const auto& u : updates) {
    if (u.fit.spec.covariate == j) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(updates.size());
}

std::optional<Eigen::VectorXd> PredictorEnsemble::linear_coefficients(int n_covariates) const {
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(n_covariates + 1);
  coef(0) = offset;
  for (const auto& u : updates) {
    switch (u.fit.spec.kind) {
      case LearnerKind::intercept:
        coef(0) += u.step_length * u.fit.coef(0);
        break;
      case LearnerKind::linear:
        coef(0) += u.step_length * u.fit.coef(0);
        coef(u.fit.spec.covariate + 1) += u.step_length * u.fit.coef(1);
        break;
      case LearnerKind::pspline:
        return std::nullopt;
    }
  }
  return coef;
}

std::vector<LearnerSet> prepare_learners(
    const std::vector<std::vector<BaseLearnerSpec>>& specs_per_param, const Eigen::MatrixXd& X,
    std::vector<std::string>* dropped) {
  std::vector<LearnerSet> sets(specs_per_param.size());
  for (size_t k = 0; k < specs_per_param.size(); ++k) {
    for (const auto& spec : specs_per_param[k]) {
      try {
        Eigen::VectorXd x = spec.kind == LearnerKind::intercept
                                ? Eigen::VectorXd::Zero(X.rows())
                                : Eigen::VectorXd(X.col(spec.covariate));
        sets[k].learners.push_back(std::make_shared<PreparedLearner>(spec, x));
      } catch (const DegenerateLearnerError& e) {
        if (dropped) {
          dropped->push_back("parameter " + std::to_string(k + 1) + ": " + e.what());
        }
      }
    }
  }
  return sets;
}

Eigen::MatrixXd weighted_gradients(const ResponseFamily& family, const Eigen::VectorXd& y,
                                   const std::vector<Eigen::VectorXd>& eta,
                                   const Eigen::VectorXd& w) {
  const int K = family.param_count();
  const auto T = y.size();
  Eigen::MatrixXd grads = Eigen::MatrixXd::Zero(T, K);
  Eigen::VectorXd theta(K);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (w(t) == 0.0) continue;
    for (int k = 0; k < K; ++k) theta(k) = link_invert(family.link(k), eta[static_cast<size_t>(k)](t));
    for (int k = 0; k < K; ++k) grads(t, k) = w(t) * family.gradient(y(t), theta, k);
  }
  return grads;
}

double weighted_loglik(const ResponseFamily& family, const Eigen::VectorXd& y,
                       const std::vector<Eigen::VectorXd>& eta, const Eigen::VectorXd& w) {
  const int K = family.param_count();
  Eigen::VectorXd theta(K);
  double ll = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (w(t) == 0.0) continue;
    for (int k = 0; k < K; ++k) theta(k) = link_invert(family.link(k), eta[static_cast<size_t>(k)](t));
    ll += w(t) * family.log_density(y(t), theta);
  }
  return ll;
}

int select_within_parameter(const std::vector<BaseLearnerFit>& candidates) {
  if (candidates.empty()) throw NoCandidateError("no base-learner candidates to select from");
  size_t best = 0;
  for (size_t j = 1; j < candidates.size(); ++j) {
    if (fit_beats(candidates[j], candidates[best])) best = j;
  }
  return static_cast<int>(best);
}

namespace {

// Weighted log-likelihood with parameter k provisionally moved to eta_k +
// sl * prediction; shared by selection and by the inner loop.
double provisional_loglik(const ResponseFamily& family, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& eta,
                          int k, const Eigen::VectorXd& prediction, double sl) {
  const int K = family.param_count();
  Eigen::VectorXd theta(K);
  double ll = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (w(t) == 0.0) continue;
    for (int j = 0; j < K; ++j) {
      const double e = j == k ? eta[static_cast<size_t>(j)](t) + sl * prediction(t)
                              : eta[static_cast<size_t>(j)](t);
      theta(j) = link_invert(family.link(j), e);
    }
    ll += w(t) * family.log_density(y(t), theta);
  }
  return ll;
}

}  // namespace

int select_across_parameters(const ResponseFamily& family, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& eta,
                             const std::vector<std::optional<Eigen::VectorXd>>& predictions,
                             double step_length) {
  int best = -1;
  double best_ll = kNegInf;
  for (size_t k = 0; k < predictions.size(); ++k) {
    if (!predictions[k]) continue;
    const double ll =
        provisional_loglik(family, y, w, eta, static_cast<int>(k), *predictions[k], step_length);
    if (best < 0 || ll > best_ll) {
      best = static_cast<int>(k);
      best_ll = ll;
    }
  }
  if (best < 0) throw NoCandidateError("no parameter has a candidate update");
  return best;
}

int boost_state(const ResponseFamily& family, const Dataset& data, const Eigen::VectorXd& w,
                const std::vector<LearnerSet>& learners, const BoostConfig& cfg,
                std::vector<PredictorEnsemble>& ensembles, std::vector<Eigen::VectorXd>& eta) {
  const int K = family.param_count();
  if (static_cast<int>(learners.size()) != K || static_cast<int>(ensembles.size()) != K ||
      static_cast<int>(eta.size()) != K) {
    throw InvalidInputError("boost_state: per-parameter containers must have K entries");
  }
  if (!(cfg.step_length > 0.0 && cfg.step_length < 1.0)) {
    throw InvalidInputError("step length must lie in (0, 1)");
  }
  if (cfg.n_stop < 0) throw InvalidInputError("n_stop must be >= 0");

  int committed = 0;
  double ll_current = weighted_loglik(family, data.y, eta, w);

  for (int n = 0; n < cfg.n_stop; ++n) {
    const Eigen::MatrixXd grads = weighted_gradients(family, data.y, eta, w);

    // Within each parameter: fit every candidate to the gradient column and
    // keep the RSS winner (candidates are ordered by covariate index, so the
    // running comparison ties toward the lowest index).
    std::vector<std::optional<BaseLearnerFit>> winners(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXd g = grads.col(k);
      for (const auto& learner : learners[static_cast<size_t>(k)].learners) {
        BaseLearnerFit f = learner->fit(g);
        if (!winners[static_cast<size_t>(k)] || fit_beats(f, *winners[static_cast<size_t>(k)])) {
          winners[static_cast<size_t>(k)] = std::move(f);
        }
      }
    }

    // Across parameters: the weighted log-likelihood under each provisional
    // update decides which single predictor is committed.
    int k_star = -1;
    double ll_star = kNegInf;
    std::vector<Eigen::VectorXd> predictions(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      if (!winners[static_cast<size_t>(k)]) continue;
      predictions[static_cast<size_t>(k)] =
          training_prediction(*winners[static_cast<size_t>(k)], data.X);
      const double ll = provisional_loglik(family, data.y, w, eta, k,
                                           predictions[static_cast<size_t>(k)], cfg.step_length);
      if (k_star < 0 || ll > ll_star) {
        k_star = k;
        ll_star = ll;
      }
    }
    if (k_star < 0) break;  // every parameter is out of candidates

    if (cfg.reject_nonimproving && ll_star < ll_current) break;

    auto& eta_k = eta[static_cast<size_t>(k_star)];
    const auto& pred = predictions[static_cast<size_t>(k_star)];
    for (Eigen::Index t = 0; t < eta_k.size(); ++t) eta_k(t) += cfg.step_length * pred(t);
    ensembles[static_cast<size_t>(k_star)].updates.push_back(
        {std::move(*winners[static_cast<size_t>(k_star)]), cfg.step_length});
    ll_current = ll_star;
    ++committed;
  }
  return committed;
}

}  // namespace msboost
