// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

// CDLL with the density term taken from maintained predictor vectors;
// avoids re-evaluating the (growing) ensembles every EM iteration.
double cdll_from_eta(const Dataset& data, const ResponseFamily& family, const StateModel& model,
                     const std::vector<std::vector<Eigen::VectorXd>>& eta,
                     const PosteriorWeights& weights, const std::vector<bool>& live) {
  const int N = model.n_states();
  const int K = family.param_count();
  double term_delta = 0.0;
  for (int i = 0; i < N; ++i) {
    const double u0 = weights.u(0, i);
    if (u0 > 0.0) term_delta += u0 * std::log(model.delta(i));
  }
  double term_gamma = 0.0;
  for (const auto& vt : weights.v) {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (vt(i, j) > 0.0) term_gamma += vt(i, j) * std::log(model.gamma(i, j));
      }
    }
  }
  double term_dens = 0.0;
  Eigen::VectorXd theta(K);
  for (int i = 0; i < N; ++i) {
    for (Eigen::Index t = 0; t < data.T(); ++t) {
      if (!live[static_cast<size_t>(t)]) continue;
      const double u = weights.u(t, i);
      if (u == 0.0) continue;
      for (int k = 0; k < K; ++k) {
        theta(k) = link_invert(family.link(k), eta[static_cast<size_t>(i)][static_cast<size_t>(k)](t));
      }
      term_dens += u * family.log_density(data.y(t), theta);
    }
  }
  return term_delta + term_gamma + term_dens;
}

}  // namespace

std::vector<std::vector<BaseLearnerSpec>> expand_learner_specs(
    const std::vector<LearnerConfig>& learners, Eigen::Index n_covariates) {
  std::vector<std::vector<BaseLearnerSpec>> specs(learners.size());
  for (size_t k = 0; k < learners.size(); ++k) {
    const auto& cfg = learners[k];
    if (cfg.kind == LearnerKind::intercept) {
      specs[k].push_back({LearnerKind::intercept, -1, cfg.pspline});
    } else {
      for (int j = 0; j < n_covariates; ++j) {
        specs[k].push_back({cfg.kind, j, cfg.pspline});
      }
    }
  }
  return specs;
}

void FitConfig::validate() const {
  if (n_states < 1) throw InvalidInputError("n_states must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInputError("tolerance must be positive");
  if (max_em_iterations < 1) throw InvalidInputError("max_em_iterations must be >= 1");
  if (!(step_length > 0.0 && step_length < 1.0)) {
    throw InvalidInputError("step length must lie in (0, 1)");
  }
  if (static_cast<int>(n_stop.size()) != n_states) {
    throw InvalidInputError("n_stop needs one entry per state");
  }
  for (int n : n_stop) {
    if (n < 0) throw InvalidInputError("n_stop entries must be >= 0");
  }
  if (learners.empty()) throw InvalidInputError("no base-learner configuration given");
  if (n_restarts < 0) throw InvalidInputError("n_restarts must be >= 0");
  if (em_chunk < 1) throw InvalidInputError("em_chunk must be >= 1");
  if (!(probe_fraction > 0.0 && probe_fraction < 0.5)) {
    throw InvalidInputError("probe_fraction must lie in (0, 0.5)");
  }
}

BoostConfig FitConfig::boost_config(int state) const {
  BoostConfig cfg;
  cfg.n_stop = n_stop[static_cast<size_t>(state)];
  cfg.step_length = step_length;
  cfg.reject_nonimproving = !exact_paper;
  return cfg;
}

std::vector<Eigen::MatrixXd> FittedModel::predict_parameters(const Eigen::MatrixXd& X) const {
  const int N = n_states();
  const int K = n_params();
  std::vector<Eigen::MatrixXd> theta(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd m(X.rows(), K);
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXd eta = ensembles[static_cast<size_t>(i)][static_cast<size_t>(k)].evaluate(X);
      for (Eigen::Index t = 0; t < X.rows(); ++t) {
        m(t, k) = link_invert(family->link(k), eta(t));
      }
    }
    theta[static_cast<size_t>(i)] = std::move(m);
  }
  return theta;
}

LogDensityTable FittedModel::log_density_table(const Dataset& data) const {
  const int N = n_states();
  const int K = n_params();
  const auto theta = predict_parameters(data.X);
  LogDensityTable logdens(data.T(), N);
  Eigen::VectorXd th(K);
  for (int i = 0; i < N; ++i) {
    for (Eigen::Index t = 0; t < data.T(); ++t) {
      th = theta[static_cast<size_t>(i)].row(t).transpose();
      logdens(t, i) = family->log_density(data.y(t), th);
    }
  }
  return logdens;
}

double FittedModel::mean_dwell_time(int state) const {
  return 1.0 / (1.0 - state_model.gamma(state, state));
}

double complete_data_loglik(const Dataset& data, const ResponseFamily& family,
                            const StateModel& model,
                            const std::vector<std::vector<PredictorEnsemble>>& ensembles,
                            const PosteriorWeights& weights) {
  const int N = model.n_states();
  const int K = family.param_count();
  std::vector<std::vector<Eigen::VectorXd>> eta(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    eta[static_cast<size_t>(i)].resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      eta[static_cast<size_t>(i)][static_cast<size_t>(k)] =
          ensembles[static_cast<size_t>(i)][static_cast<size_t>(k)].evaluate(data.X);
    }
  }
  const std::vector<bool> live(static_cast<size_t>(data.T()), true);
  return cdll_from_eta(data, family, model, eta, weights, live);
}

double observed_loglik(const FittedModel& model, const Dataset& data,
                       const std::vector<bool>* mask) {
  LogDensityTable logdens = model.log_density_table(data);
  if (mask) {
    if (static_cast<Eigen::Index>(mask->size()) != data.T()) {
      throw InvalidInputError("mask length does not match the dataset");
    }
    for (Eigen::Index t = 0; t < data.T(); ++t) {
      if (!(*mask)[static_cast<size_t>(t)]) logdens.row(t).setZero();
    }
  }
  return forward(logdens, model.state_model).log_likelihood;
}

namespace {

struct EmState {
  StateModel model;
  std::vector<std::vector<PredictorEnsemble>> ensembles;
  std::vector<std::vector<Eigen::VectorXd>> eta;
  double last_ll = -std::numeric_limits<double>::infinity();
};

// Builds an EM starting point from per-observation weight vectors (one per
// state): offsets from the family moments of each weighted slice, uniform
// delta, diagonally dominant gamma.
EmState init_from_slices(const Dataset& data, const ResponseFamily& family, bool stationary,
                         const std::vector<Eigen::VectorXd>& slice_weights) {
  const int N = static_cast<int>(slice_weights.size());
  const int K = family.param_count();
  const auto T = data.T();

  EmState s;
  s.model.stationary = stationary;
  s.model.delta = Eigen::VectorXd::Constant(N, 1.0 / N);
  if (N == 1) {
    s.model.gamma = Eigen::MatrixXd::Ones(1, 1);
  } else {
    s.model.gamma = Eigen::MatrixXd::Constant(N, N, 0.1 / (N - 1));
    s.model.gamma.diagonal().setConstant(0.9);
  }

  s.ensembles.assign(static_cast<size_t>(N),
                     std::vector<PredictorEnsemble>(static_cast<size_t>(K)));
  s.eta.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd offsets =
        family.initial_offsets(data.y, slice_weights[static_cast<size_t>(i)]);
    s.eta[static_cast<size_t>(i)].resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      auto& ens = s.ensembles[static_cast<size_t>(i)][static_cast<size_t>(k)];
      ens.state = i;
      ens.param = k;
      ens.offset = offsets(k);
      s.eta[static_cast<size_t>(i)][static_cast<size_t>(k)] =
          Eigen::VectorXd::Constant(T, offsets(k));
    }
  }
  return s;
}

struct RunOptions {
  // Harden the boosting weights to the decoded state (classification-EM
  // flavour). Used only while discovering the state structure; the reported
  // fit always runs with soft weights so the observed likelihood is
  // monotone.
  bool hard_weights = false;
  // Per-state boosting budget; defaults to config.n_stop.
  const std::vector<int>* budget = nullptr;
  // Warm start: perform one M-step from these posterior weights before the
  // first E-step.
  const PosteriorWeights* warm = nullptr;
  FitDiagnostics* diag = nullptr;
};

// Runs the EM loop in place: E-step, closed-form state-process updates and
// chunked per-state boosting until the observed log-likelihood stabilizes
// or max_em_iterations is reached. Returns true if the tolerance fired.
bool run_em(EmState& s, const Dataset& data, const ResponseFamily& family,
            const std::vector<LearnerSet>& sets, const std::vector<bool>& live,
            const FitConfig& config, const RunOptions& opt) {
  const int N = s.model.n_states();
  const int K = family.param_count();
  const auto T = data.T();

  LogDensityTable logdens(T, N);
  Eigen::VectorXd theta(K);
  double prev_ll = std::numeric_limits<double>::quiet_NaN();
  PosteriorWeights weights;
  std::vector<int> remaining = opt.budget ? *opt.budget : config.n_stop;

  const auto m_step = [&](const PosteriorWeights& w_post) {
    s.model.gamma = update_transitions(w_post);
    s.model.delta = config.stationary ? stationary_distribution(s.model.gamma)
                                      : update_initial(w_post);
    // local decoding for the hardened variant (ties to the lowest index)
    std::vector<int> decoded;
    if (opt.hard_weights) decoded = decode_local(w_post);

    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd w(T);
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!live[static_cast<size_t>(t)]) {
          w(t) = 0.0;
        } else if (opt.hard_weights) {
          w(t) = decoded[static_cast<size_t>(t)] == i ? 1.0 : 0.0;
        } else {
          w(t) = w_post.u(t, i);
        }
      }
      BoostConfig bc = config.boost_config(i);
      // the budget is consumed across sweeps; exact-paper mode spends the
      // full n_stop in every M-step instead
      if (!config.exact_paper) {
        bc.n_stop = std::min(config.em_chunk, remaining[static_cast<size_t>(i)]);
      }
      const int committed = boost_state(family, data, w, sets, bc,
                                        s.ensembles[static_cast<size_t>(i)],
                                        s.eta[static_cast<size_t>(i)]);
      if (!config.exact_paper) remaining[static_cast<size_t>(i)] -= committed;
    }
  };

  if (opt.warm) m_step(*opt.warm);

  for (int m = 0; m < config.max_em_iterations; ++m) {
    // E-step
    for (int i = 0; i < N; ++i) {
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!live[static_cast<size_t>(t)]) {
          logdens(t, i) = 0.0;  // held-out rows contribute the identity
          continue;
        }
        for (int k = 0; k < K; ++k) {
          theta(k) = link_invert(family.link(k),
                                 s.eta[static_cast<size_t>(i)][static_cast<size_t>(k)](t));
        }
        logdens(t, i) = family.log_density(data.y(t), theta);
      }
    }
    const ForwardResult fwd = forward(logdens, s.model);
    const Eigen::MatrixXd log_beta = backward(logdens, s.model);
    weights = posteriors(fwd.log_alpha, log_beta, logdens, s.model);
    s.last_ll = fwd.log_likelihood;
    if (opt.diag) opt.diag->loglik_trace.push_back(fwd.log_likelihood);

    for (int i = 0; i < N; ++i) {
      if (weights.u.col(i).sum() < 1e-8) {
        throw DegeneracyError("state " + std::to_string(i + 1) +
                              " has no posterior mass; consider fewer states");
      }
    }

    if (m >= 1) {
      const double change = std::abs(fwd.log_likelihood - prev_ll);
      if (change <= config.tolerance * std::max(1.0, std::abs(prev_ll))) {
        if (opt.diag) {
          opt.diag->converged = true;
          opt.diag->cdll_trace.push_back(
              cdll_from_eta(data, family, s.model, s.eta, weights, live));
        }
        return true;
      }
    }
    prev_ll = fwd.log_likelihood;

    m_step(weights);

    if (opt.diag) {
      opt.diag->cdll_trace.push_back(cdll_from_eta(data, family, s.model, s.eta, weights, live));
    }
  }
  return false;
}

}  // namespace

FittedModel fit(const Dataset& data, const FitConfig& config, const std::vector<bool>* mask,
                const std::vector<LearnerSet>* shared_learners) {
  data.validate();
  config.validate();

  auto family = std::shared_ptr<const ResponseFamily>(make_family(config.family));
  const int K = family->param_count();
  const int N = config.n_states;
  const auto T = data.T();
  if (static_cast<int>(config.learners.size()) != K) {
    throw InvalidInputError("family " + config.family + " needs " + std::to_string(K) +
                            " base-learner configurations, got " +
                            std::to_string(config.learners.size()));
  }

  std::vector<bool> live(static_cast<size_t>(T), true);
  if (mask) {
    if (static_cast<Eigen::Index>(mask->size()) != T) {
      throw InvalidInputError("mask length does not match the dataset");
    }
    live = *mask;
  }
  const auto n_live = static_cast<Eigen::Index>(std::count(live.begin(), live.end(), true));
  if (n_live < 2) throw InvalidInputError("fewer than 2 unmasked observations");

  for (Eigen::Index t = 0; t < T; ++t) {
    if (live[static_cast<size_t>(t)] && !family->in_support(data.y(t))) {
      throw InvalidInputError("response at t=" + std::to_string(t + 1) +
                              " outside the support of " + config.family);
    }
  }

  // Base-learner sets depend only on the covariate matrix; reuse across
  // states and, when the caller provides them, across fits on the same data.
  std::vector<LearnerSet> local_sets;
  const std::vector<LearnerSet>* sets = shared_learners;
  if (!sets) {
    local_sets = prepare_learners(expand_learner_specs(config.learners, data.P()), data.X);
    sets = &local_sets;
  }
  if (static_cast<int>(sets->size()) != K) {
    throw InvalidInputError("learner sets must have one entry per distribution parameter");
  }

  // Starting hard assignments: the quantile split first (state i covers the
  // i-th slice of the sorted unmasked response), then random contiguous
  // blocks (regimes are persistent, so blocks carry a usable alignment tilt
  // that plain i.i.d. coin flips would not).
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<size_t>(n_live));
  for (Eigen::Index t = 0; t < T; ++t) {
    if (live[static_cast<size_t>(t)]) order.push_back(t);
  }
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return data.y(a) < data.y(b); });

  std::vector<std::vector<int>> starts;
  {
    std::vector<int> assignment(static_cast<size_t>(T), 0);
    for (size_t r = 0; r < order.size(); ++r) {
      assignment[static_cast<size_t>(order[r])] =
          static_cast<int>(r * static_cast<size_t>(N) / order.size());
    }
    starts.push_back(std::move(assignment));
  }
  if (N >= 2 && config.n_restarts > 0) {
    std::mt19937_64 rng(config.seed);
    const auto block = std::max<Eigen::Index>(5, T / 20);
    for (int r = 0; r < config.n_restarts; ++r) {
      std::vector<int> assignment(static_cast<size_t>(T), 0);
      std::uniform_int_distribution<int> pick(0, N - 1);
      for (Eigen::Index start = 0; start < T; start += block) {
        const int i = pick(rng);
        for (Eigen::Index t = start; t < std::min(T, start + block); ++t) {
          assignment[static_cast<size_t>(t)] = i;
        }
      }
      std::vector<int> seen(static_cast<size_t>(N), 0);
      for (Eigen::Index t = 0; t < T; ++t) {
        if (live[static_cast<size_t>(t)]) seen[static_cast<size_t>(assignment[static_cast<size_t>(t)])] = 1;
      }
      if (std::accumulate(seen.begin(), seen.end(), 0) == N) {
        starts.push_back(std::move(assignment));
      }
    }
  }

  // One-hot posterior weights and slice indicators of a hard assignment.
  const auto hard_weights_of = [&](const std::vector<int>& assignment) {
    PosteriorWeights w;
    w.u = Eigen::MatrixXd::Zero(T, N);
    for (Eigen::Index t = 0; t < T; ++t) w.u(t, assignment[static_cast<size_t>(t)]) = 1.0;
    w.v.assign(static_cast<size_t>(T - 1), Eigen::MatrixXd::Zero(N, N));
    for (Eigen::Index t = 1; t < T; ++t) {
      w.v[static_cast<size_t>(t - 1)](assignment[static_cast<size_t>(t - 1)],
                                      assignment[static_cast<size_t>(t)]) = 1.0;
    }
    return w;
  };
  const auto slices_of = [&](const std::vector<int>& assignment) {
    std::vector<Eigen::VectorXd> slices(static_cast<size_t>(N), Eigen::VectorXd::Zero(T));
    for (Eigen::Index t = 0; t < T; ++t) {
      if (live[static_cast<size_t>(t)]) {
        slices[static_cast<size_t>(assignment[static_cast<size_t>(t)])](t) = 1.0;
      }
    }
    return slices;
  };

  // Evaluates the mask-aware log-density table of an EM state.
  const auto fill_logdens = [&](const EmState& state, LogDensityTable& logdens) {
    Eigen::VectorXd theta(K);
    for (int i = 0; i < N; ++i) {
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!live[static_cast<size_t>(t)]) {
          logdens(t, i) = 0.0;
          continue;
        }
        for (int k = 0; k < K; ++k) {
          theta(k) = link_invert(family->link(k),
                                 state.eta[static_cast<size_t>(i)][static_cast<size_t>(k)](t));
        }
        logdens(t, i) = family->log_density(data.y(t), theta);
      }
    }
  };

  const auto finish = [&](EmState&& state, FitDiagnostics&& diag) {
    diag.iterations = static_cast<int>(diag.loglik_trace.size());
    FittedModel fitted;
    fitted.family_name = config.family;
    fitted.family = family;
    fitted.state_model = std::move(state.model);
    fitted.ensembles = std::move(state.ensembles);
    fitted.diagnostics = std::move(diag);
    relabel_states(fitted);
    return fitted;
  };

  if (starts.size() == 1) {
    EmState state = init_from_slices(data, *family, config.stationary, slices_of(starts[0]));
    FitDiagnostics diag;
    RunOptions opt;
    opt.diag = &diag;
    run_em(state, data, *family, *sets, live, config, opt);
    return finish(std::move(state), std::move(diag));
  }

  // Structure discovery: each start first trains on its own hard assignment
  // (warm M-step), then runs in classification-EM flavour with a probe
  // subset masked, and is scored by the likelihood the forward algorithm
  // attributes to the probe points. In-sample likelihood cannot tell a
  // spurious level split from the regime structure; out-of-sample
  // likelihood can.
  std::vector<bool> probe_train = live;
  {
    std::vector<Eigen::Index> live_idx;
    for (Eigen::Index t = 0; t < T; ++t) {
      if (live[static_cast<size_t>(t)]) live_idx.push_back(t);
    }
    std::seed_seq seq{static_cast<unsigned int>(config.seed & 0xffffffffu),
                      static_cast<unsigned int>(config.seed >> 32), 0x70726f62u};
    std::mt19937_64 rng(seq);
    std::shuffle(live_idx.begin(), live_idx.end(), rng);
    auto n_hold =
        static_cast<size_t>(config.probe_fraction * static_cast<double>(live_idx.size()));
    n_hold = std::max<size_t>(1, std::min(n_hold, live_idx.size() - 2));
    for (size_t r = 0; r < n_hold; ++r) {
      probe_train[static_cast<size_t>(live_idx[r])] = false;
    }
  }

  std::vector<EmState> candidates;
  std::vector<double> scores;
  for (const auto& assignment : starts) {
    EmState state = init_from_slices(data, *family, config.stationary, slices_of(assignment));
    const PosteriorWeights warm0 = hard_weights_of(assignment);
    RunOptions opt;
    opt.hard_weights = true;
    opt.warm = &warm0;
    try {
      run_em(state, data, *family, *sets, probe_train, config, opt);
    } catch (const DegeneracyError&) {
      continue;  // a collapsed start just loses the contest
    }
    LogDensityTable logdens(T, N);
    fill_logdens(state, logdens);
    const double ll_all = forward(logdens, state.model).log_likelihood;
    for (Eigen::Index t = 0; t < T; ++t) {
      if (!probe_train[static_cast<size_t>(t)]) logdens.row(t).setZero();
    }
    const double ll_train = forward(logdens, state.model).log_likelihood;
    candidates.push_back(std::move(state));
    scores.push_back(ll_all - ll_train);
  }

  std::vector<size_t> ranking(candidates.size());
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  // The winner's posterior weights warm-start the reported fit: fresh
  // offsets from the posterior-weighted moments, one M-step from the warm
  // weights, then plain soft EM with the full budget on all live rows.
  std::string first_error;
  for (size_t c : ranking) {
    LogDensityTable logdens(T, N);
    fill_logdens(candidates[c], logdens);
    const ForwardResult fwd = forward(logdens, candidates[c].model);
    const Eigen::MatrixXd log_beta = backward(logdens, candidates[c].model);
    const PosteriorWeights warm =
        posteriors(fwd.log_alpha, log_beta, logdens, candidates[c].model);

    std::vector<Eigen::VectorXd> warm_slices(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd w = warm.u.col(i);
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!live[static_cast<size_t>(t)]) w(t) = 0.0;
      }
      warm_slices[static_cast<size_t>(i)] = std::move(w);
    }

    EmState state = init_from_slices(data, *family, config.stationary, warm_slices);
    FitDiagnostics diag;
    RunOptions opt;
    opt.warm = &warm;
    opt.diag = &diag;
    try {
      run_em(state, data, *family, *sets, live, config, opt);
    } catch (const DegeneracyError& e) {
      if (first_error.empty()) first_error = e.what();
      continue;
    }
    return finish(std::move(state), std::move(diag));
  }

  // Every multi-start candidate collapsed; fall back to the plain
  // quantile-slice run before giving up.
  try {
    EmState state = init_from_slices(data, *family, config.stationary, slices_of(starts[0]));
    FitDiagnostics diag;
    RunOptions opt;
    opt.diag = &diag;
    run_em(state, data, *family, *sets, live, config, opt);
    return finish(std::move(state), std::move(diag));
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(first_error.empty() ? e.what() : first_error);
  }
}

void relabel_states(FittedModel& model) {
  const int N = model.n_states();
  std::vector<int> perm(static_cast<size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return model.ensembles[static_cast<size_t>(a)][0].offset <
           model.ensembles[static_cast<size_t>(b)][0].offset;
  });

  Eigen::MatrixXd gamma(N, N);
  Eigen::VectorXd delta(N);
  std::vector<std::vector<PredictorEnsemble>> ens(static_cast<size_t>(N));
  for (int a = 0; a < N; ++a) {
    delta(a) = model.state_model.delta(perm[static_cast<size_t>(a)]);
    for (int b = 0; b < N; ++b) {
      gamma(a, b) = model.state_model.gamma(perm[static_cast<size_t>(a)], perm[static_cast<size_t>(b)]);
    }
    ens[static_cast<size_t>(a)] = std::move(model.ensembles[static_cast<size_t>(perm[static_cast<size_t>(a)])]);
    for (auto& e : ens[static_cast<size_t>(a)]) e.state = a;
  }
  model.state_model.gamma = std::move(gamma);
  model.state_model.delta = std::move(delta);
  model.ensembles = std::move(ens);
}

}  // namespace msboost
