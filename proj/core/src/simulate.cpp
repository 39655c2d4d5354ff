// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/simulate.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "msboost/errors.hpp"
#include "msboost/model_io.hpp"
#include "msboost/modelselect.hpp"

namespace msboost {

namespace {

std::mt19937_64 replication_rng(unsigned long long seed, int replication) {
  std::seed_seq seq{static_cast<unsigned int>(seed & 0xffffffffu),
                    static_cast<unsigned int>(seed >> 32),
                    static_cast<unsigned int>(replication), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

int draw_categorical(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

}  // namespace

void ExperimentDesign::validate() const {
  if (T < 2) throw InvalidInputError("design needs T >= 2");
  if (N < 1 || P < 1) throw InvalidInputError("design needs N >= 1 and P >= 1");
  StateModel sm;
  sm.gamma = gamma;
  sm.delta = delta;
  sm.validate();
  if (static_cast<int>(eta_true.size()) != N) {
    throw InvalidInputError("design needs one predictor row per state");
  }
  const auto family_obj = make_family(family);
  for (const auto& row : eta_true) {
    if (static_cast<int>(row.size()) != family_obj->param_count()) {
      throw InvalidInputError("design needs one predictor per distribution parameter");
    }
  }
  for (int j : informative) {
    if (j < 0 || j >= P) throw InvalidInputError("informative covariate index out of range");
  }
}

ExperimentDesign linear_nbinom_design() {
  ExperimentDesign d;
  d.name = "linear-nbinom";
  d.family = "nbinom";
  d.T = 500;
  d.N = 2;
  d.P = 100;
  d.gamma.resize(2, 2);
  d.gamma << 0.95, 0.05, 0.05, 0.95;
  d.delta = Eigen::VectorXd::Constant(2, 0.5);
  d.informative = {0};
  const auto x1 = [](const Eigen::RowVectorXd& x) { return x(0); };
  d.eta_true = {
      {[=](const Eigen::RowVectorXd& x) { return 2.0 + 2.0 * x1(x); },
       [=](const Eigen::RowVectorXd& x) { return 2.0 * x1(x); }},
      {[=](const Eigen::RowVectorXd& x) { return 2.0 - 2.0 * x1(x); },
       [=](const Eigen::RowVectorXd& x) { return -2.0 * x1(x); }},
  };
  return d;
}

ExperimentDesign nonlinear_normal_design() {
  ExperimentDesign d;
  d.name = "nonlinear-normal";
  d.family = "normal";
  d.T = 500;
  d.N = 2;
  d.P = 100;
  d.gamma.resize(2, 2);
  d.gamma << 0.95, 0.05, 0.05, 0.95;
  d.delta = Eigen::VectorXd::Constant(2, 0.5);
  d.informative = {0};
  const auto s = [](const Eigen::RowVectorXd& x) {
    return std::sin(std::numbers::pi * (x(0) - 0.5));
  };
  d.eta_true = {
      {[=](const Eigen::RowVectorXd& x) { return 2.0 + 2.0 * s(x); },
       [=](const Eigen::RowVectorXd& x) { return s(x); }},
      {[=](const Eigen::RowVectorXd& x) { return -2.0 - s(x); },
       [=](const Eigen::RowVectorXd& x) { return -2.0 * s(x); }},
  };
  return d;
}

std::vector<int> simulate_chain(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& delta,
                                int T, std::mt19937_64& rng) {
  StateModel sm;
  sm.gamma = gamma;
  sm.delta = delta;
  sm.validate();
  std::vector<int> states(static_cast<size_t>(T));
  states[0] = draw_categorical(delta, rng);
  for (int t = 1; t < T; ++t) {
    states[static_cast<size_t>(t)] =
        draw_categorical(gamma.row(states[static_cast<size_t>(t - 1)]).transpose(), rng);
  }
  return states;
}

std::vector<int> simulate_chain(int N, const Eigen::MatrixXd& gamma, const Eigen::VectorXd& delta,
                                int T, unsigned long long seed) {
  if (gamma.rows() != N || delta.size() != N) {
    throw InvalidInputError("state count does not match gamma/delta");
  }
  auto rng = replication_rng(seed, 0);
  return simulate_chain(gamma, delta, T, rng);
}

Eigen::MatrixXd simulate_covariates(int T, int P, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd X(T, P);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < P; ++j) X(t, j) = unif(rng);
  }
  return X;
}

Eigen::VectorXd simulate_response(const ExperimentDesign& design, const std::vector<int>& states,
                                  const Eigen::MatrixXd& X, std::mt19937_64& rng) {
  const auto family = make_family(design.family);
  const int K = family->param_count();
  const auto T = X.rows();
  if (static_cast<Eigen::Index>(states.size()) != T) {
    throw InvalidInputError("state sequence length does not match the covariates");
  }
  Eigen::VectorXd y(T);
  Eigen::VectorXd theta(K);
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto& preds = design.eta_true[static_cast<size_t>(states[static_cast<size_t>(t)])];
    for (int k = 0; k < K; ++k) {
      theta(k) = link_invert(family->link(k), preds[static_cast<size_t>(k)](X.row(t)));
    }
    y(t) = family->sample(theta, rng);
  }
  return y;
}

Eigen::VectorXd simulate_response(const ExperimentDesign& design, const std::vector<int>& states,
                                  const Eigen::MatrixXd& X, unsigned long long seed) {
  auto rng = replication_rng(seed, 0);
  return simulate_response(design, states, X, rng);
}

Dataset simulate_dataset(const ExperimentDesign& design, unsigned long long seed, int replication,
                         std::vector<int>* states_out) {
  design.validate();
  auto rng = replication_rng(seed, replication);
  Dataset data;
  data.X = simulate_covariates(design.T, design.P, rng);
  const auto states = simulate_chain(design.gamma, design.delta, design.T, rng);
  data.y = simulate_response(design, states, data.X, rng);
  data.covariate_names.resize(static_cast<size_t>(design.P));
  for (int j = 0; j < design.P; ++j) {
    data.covariate_names[static_cast<size_t>(j)] = "x" + std::to_string(j + 1);
  }
  if (states_out) *states_out = states;
  return data;
}

void ReplicationReport::aggregate(const ExperimentDesign& design) {
  const int N = design.N;
  const auto family = make_family(design.family);
  const int K = family->param_count();

  std::vector<bool> is_informative(static_cast<size_t>(design.P), false);
  for (int j : design.informative) is_informative[static_cast<size_t>(j)] = true;
  const int n_informative = static_cast<int>(design.informative.size());
  const int n_noise = design.P - n_informative;

  gamma_mean = Eigen::MatrixXd::Zero(N, N);
  gamma_sd = Eigen::MatrixXd::Zero(N, N);
  informative_rate_per_param.assign(static_cast<size_t>(K), 0.0);
  noise_rate_per_param.assign(static_cast<size_t>(K), 0.0);
  failures = 0;

  int ok_runs = 0;
  for (const auto& run : runs) {
    if (!run.ok) {
      ++failures;
      continue;
    }
    ++ok_runs;
    gamma_mean += run.gamma_hat;
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < design.P; ++j) {
          const bool sel = run.selected[static_cast<size_t>(i)][static_cast<size_t>(k)]
                                       [static_cast<size_t>(j)];
          if (!sel) continue;
          if (is_informative[static_cast<size_t>(j)]) {
            informative_rate_per_param[static_cast<size_t>(k)] += 1.0;
          } else {
            noise_rate_per_param[static_cast<size_t>(k)] += 1.0;
          }
        }
      }
    }
  }
  if (ok_runs == 0) return;

  gamma_mean /= ok_runs;
  for (const auto& run : runs) {
    if (!run.ok) continue;
    const Eigen::MatrixXd d = run.gamma_hat - gamma_mean;
    gamma_sd += d.cwiseProduct(d);
  }
  gamma_sd = (gamma_sd / ok_runs).cwiseSqrt();

  informative_rate = 0.0;
  noise_rate = 0.0;
  for (int k = 0; k < K; ++k) {
    auto& inf = informative_rate_per_param[static_cast<size_t>(k)];
    auto& noi = noise_rate_per_param[static_cast<size_t>(k)];
    if (n_informative > 0) inf /= static_cast<double>(ok_runs) * N * n_informative;
    if (n_noise > 0) noi /= static_cast<double>(ok_runs) * N * n_noise;
    informative_rate += inf;
    noise_rate += noi;
  }
  informative_rate /= K;
  noise_rate /= K;
}

ReplicationReport run_experiment(const ExperimentDesign& design, const ExperimentConfig& config) {
  design.validate();
  if (config.replications < 1) throw InvalidInputError("replications must be >= 1");
  if (config.cv_inside && config.cv_grid.empty()) {
    throw InvalidInputError("cv_inside requires a non-empty grid");
  }

  ReplicationReport report;
  report.design_name = design.name;
  report.runs.assign(static_cast<size_t>(config.replications), RunRecord{});

  std::atomic<size_t> next{0};
  auto run_one = [&](int rep) {
    RunRecord rec;
    rec.replication = rep;
    try {
      Dataset data = simulate_dataset(design, config.seed, rep);
      FitConfig cfg = config.fit;
      cfg.n_states = design.N;
      cfg.family = design.family;
      if (config.cv_inside) {
        const CvPlan plan = CvPlan::random_subsets(design.T, config.cv_folds,
                                                   config.seed + static_cast<unsigned long long>(rep));
        const CvResult cv = cross_validate(data, cfg, config.cv_grid, plan, 1);
        cfg.n_stop = cv.chosen_tuple();
      }
      const FittedModel model = fit(data, cfg);
      if (!config.save_dir.empty()) {
        write_model_json(model,
                         config.save_dir + "/model_rep" + std::to_string(rep + 1) + ".json");
      }
      rec.gamma_hat = model.state_model.gamma;
      rec.n_stop_used = cfg.n_stop;
      const int K = model.n_params();
      rec.selected.assign(
          static_cast<size_t>(design.N),
          std::vector<std::vector<bool>>(static_cast<size_t>(K),
                                         std::vector<bool>(static_cast<size_t>(design.P), false)));
      for (int i = 0; i < design.N; ++i) {
        for (int k = 0; k < K; ++k) {
          for (int j = 0; j < design.P; ++j) {
            rec.selected[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(j)] =
                model.ensembles[static_cast<size_t>(i)][static_cast<size_t>(k)].uses_covariate(j);
          }
        }
      }
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    report.runs[static_cast<size_t>(rep)] = std::move(rec);
  };

  const int n_threads =
      std::max(1, std::min(config.workers, config.replications));
  if (n_threads == 1) {
    for (int rep = 0; rep < config.replications; ++rep) run_one(rep);
  } else {
    auto drain = [&]() {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= static_cast<size_t>(config.replications)) break;
        run_one(static_cast<int>(i));
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t + 1 < n_threads; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
  }

  report.aggregate(design);
  if (report.failures * 5 > config.replications) {
    throw DegeneracyError(std::to_string(report.failures) + " of " +
                          std::to_string(config.replications) +
                          " replications failed (> 20 %)");
  }
  return report;
}

}  // namespace msboost
