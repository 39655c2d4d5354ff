// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "msboost/em.hpp"
#include "msboost/errors.hpp"
#include "msboost/model_io.hpp"
#include "msboost/simulate.hpp"

using namespace msboost;

namespace {

FitConfig base_config(const std::string& family, int n_states, LearnerKind kind,
                      std::vector<int> n_stop) {
  FitConfig cfg;
  cfg.family = family;
  cfg.n_states = n_states;
  cfg.learners = {{kind, {}}, {kind, {}}};
  cfg.n_stop = std::move(n_stop);
  return cfg;
}

ExperimentDesign small_linear_design(int T, int P) {
  auto d = linear_nbinom_design();
  d.T = T;
  d.P = P;
  return d;
}

ExperimentDesign small_nonlinear_design(int T, int P) {
  auto d = nonlinear_normal_design();
  d.T = T;
  d.P = P;
  return d;
}

}  // namespace

TEST_CASE("complete-data log-likelihood") {
  const auto family = make_family("normal");
  const int T = 5;
  Dataset data;
  data.y.resize(T);
  data.y << 0.5, -0.2, 1.1, 0.8, -0.7;
  data.X = Eigen::MatrixXd::Zero(T, 1);

  SUBCASE("single state reduces to the plain log-likelihood") {
    StateModel m;
    m.gamma = Eigen::MatrixXd::Ones(1, 1);
    m.delta = Eigen::VectorXd::Ones(1);
    std::vector<std::vector<PredictorEnsemble>> ens(1, std::vector<PredictorEnsemble>(2));
    ens[0][0].offset = 0.3;
    ens[0][1].offset = std::log(0.9);
    PosteriorWeights w;
    w.u = Eigen::MatrixXd::Ones(T, 1);
    w.v.assign(T - 1, Eigen::MatrixXd::Ones(1, 1));

    double expected = 0.0;
    Eigen::VectorXd theta(2);
    theta << 0.3, 0.9;
    for (int t = 0; t < T; ++t) expected += family->log_density(data.y(t), theta);
    CHECK(complete_data_loglik(data, *family, m, ens, w) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("hard weights recover the joint path log-probability") {
    StateModel m;
    m.gamma.resize(2, 2);
    m.gamma << 0.8, 0.2, 0.3, 0.7;
    m.delta.resize(2);
    m.delta << 0.6, 0.4;
    std::vector<std::vector<PredictorEnsemble>> ens(2, std::vector<PredictorEnsemble>(2));
    ens[0][0].offset = -1.0;
    ens[0][1].offset = 0.0;
    ens[1][0].offset = 1.0;
    ens[1][1].offset = std::log(2.0);

    const std::vector<int> path = {0, 1, 1, 0, 1};
    PosteriorWeights w;
    w.u = Eigen::MatrixXd::Zero(T, 2);
    for (int t = 0; t < T; ++t) w.u(t, path[static_cast<size_t>(t)]) = 1.0;
    w.v.assign(T - 1, Eigen::MatrixXd::Zero(2, 2));
    for (int t = 1; t < T; ++t) {
      w.v[static_cast<size_t>(t - 1)](path[static_cast<size_t>(t - 1)],
                                      path[static_cast<size_t>(t)]) = 1.0;
    }

    double expected = std::log(m.delta(path[0]));
    for (int t = 1; t < T; ++t) {
      expected += std::log(m.gamma(path[static_cast<size_t>(t - 1)], path[static_cast<size_t>(t)]));
    }
    Eigen::VectorXd theta(2);
    for (int t = 0; t < T; ++t) {
      const int i = path[static_cast<size_t>(t)];
      theta << ens[static_cast<size_t>(i)][0].offset,
          std::exp(ens[static_cast<size_t>(i)][1].offset);
      expected += family->log_density(data.y(t), theta);
    }
    CHECK(complete_data_loglik(data, *family, m, ens, w) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("random soft weights match term-by-term summation, zero weights kill -inf") {
    StateModel m;
    m.gamma.resize(2, 2);
    m.gamma << 1.0, 0.0, 0.4, 0.6;  // gamma_12 = 0 with v weight 0 there
    m.delta.resize(2);
    m.delta << 1.0, 0.0;  // log delta_2 = -inf but u(0,1) = 0
    std::vector<std::vector<PredictorEnsemble>> ens(2, std::vector<PredictorEnsemble>(2));
    ens[0][0].offset = 0.0;
    ens[0][1].offset = 0.0;
    ens[1][0].offset = 0.5;
    ens[1][1].offset = -0.1;

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    PosteriorWeights w;
    w.u.resize(T, 2);
    for (int t = 0; t < T; ++t) {
      const double p = unif(rng);
      w.u(t, 0) = p;
      w.u(t, 1) = 1.0 - p;
    }
    w.u(0, 0) = 1.0;
    w.u(0, 1) = 0.0;
    w.v.assign(T - 1, Eigen::MatrixXd::Zero(2, 2));
    for (int t = 0; t < T - 1; ++t) {
      Eigen::MatrixXd vt(2, 2);
      vt << unif(rng), 0.0, unif(rng), unif(rng);
      vt /= vt.sum();
      w.v[static_cast<size_t>(t)] = vt;
    }

    double expected = w.u(0, 0) * std::log(m.delta(0));
    for (const auto& vt : w.v) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (vt(i, j) > 0.0) expected += vt(i, j) * std::log(m.gamma(i, j));
        }
      }
    }
    Eigen::VectorXd theta(2);
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < 2; ++i) {
        theta << ens[static_cast<size_t>(i)][0].offset,
            std::exp(ens[static_cast<size_t>(i)][1].offset);
        expected += w.u(t, i) * family->log_density(data.y(t), theta);
      }
    }
    const double got = complete_data_loglik(data, *family, m, ens, w);
    CHECK(std::isfinite(got));
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("single-state intercept fit recovers the closed-form MLE") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> norm(3.2, 1.7);
  const int T = 400;
  Dataset data;
  data.y.resize(T);
  for (int t = 0; t < T; ++t) data.y(t) = norm(rng);
  data.X = Eigen::MatrixXd::Random(T, 2);

  auto cfg = base_config("normal", 1, LearnerKind::intercept, {1000});
  const auto model = fit(data, cfg);

  const double mu_mle = data.y.mean();
  const double sd_mle = std::sqrt((data.y.array() - mu_mle).square().mean());
  const auto theta = model.predict_parameters(data.X);
  CHECK(std::abs(theta[0](0, 0) - mu_mle) < 1e-3);
  CHECK(std::abs(theta[0](0, 1) - sd_mle) < 1e-3);
  CHECK(model.diagnostics.converged);
}

TEST_CASE("observed log-likelihood is non-decreasing across EM iterations") {
  const auto design = small_nonlinear_design(120, 6);
  for (int rep = 0; rep < 3; ++rep) {
    const Dataset data = simulate_dataset(design, 500 + rep, rep);
    auto cfg = base_config("normal", 2, LearnerKind::linear, {30, 30});
    cfg.max_em_iterations = 40;
    const auto model = fit(data, cfg);
    const auto& trace = model.diagnostics.loglik_trace;
    REQUIRE(trace.size() >= 2);
    for (size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] >= trace[i - 1] - 1e-10);
    }
    CHECK(static_cast<int>(trace.size()) == model.diagnostics.iterations);
    CHECK(model.diagnostics.cdll_trace.size() == trace.size());
  }
}

TEST_CASE("fixed point: once boosting stalls the likelihood freezes") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> norm(1.0, 0.5);
  const int T = 30;
  Dataset data;
  data.y.resize(T);
  for (int t = 0; t < T; ++t) data.y(t) = norm(rng);
  data.X = Eigen::MatrixXd::Random(T, 1);

  auto cfg = base_config("normal", 1, LearnerKind::intercept, {50});
  cfg.tolerance = 1e-15;
  cfg.max_em_iterations = 400;
  const auto model = fit(data, cfg);
  const auto& trace = model.diagnostics.loglik_trace;
  REQUIRE(trace.size() >= 2);
  CHECK(std::abs(trace.back() - trace[trace.size() - 2]) < 1e-12);
}

TEST_CASE("permuting state labels leaves the likelihood unchanged") {
  const auto design = small_nonlinear_design(100, 4);
  const Dataset data = simulate_dataset(design, 11, 0);
  auto cfg = base_config("normal", 2, LearnerKind::linear, {25, 25});
  cfg.max_em_iterations = 15;
  const auto model = fit(data, cfg);

  FittedModel swapped = model;
  std::swap(swapped.ensembles[0], swapped.ensembles[1]);
  for (int i = 0; i < 2; ++i) {
    for (auto& e : swapped.ensembles[static_cast<size_t>(i)]) e.state = i;
  }
  Eigen::MatrixXd g(2, 2);
  g << model.state_model.gamma(1, 1), model.state_model.gamma(1, 0),
      model.state_model.gamma(0, 1), model.state_model.gamma(0, 0);
  swapped.state_model.gamma = g;
  swapped.state_model.delta =
      Eigen::Vector2d(model.state_model.delta(1), model.state_model.delta(0));

  const double ll = observed_loglik(model, data);
  const double ll_swapped = observed_loglik(swapped, data);
  CHECK(std::abs(ll - ll_swapped) <= 1e-10 * std::max(1.0, std::abs(ll)));
}

TEST_CASE("states are reported in increasing order of the location offset") {
  const auto design = small_nonlinear_design(150, 3);
  const Dataset data = simulate_dataset(design, 77, 1);
  auto cfg = base_config("normal", 2, LearnerKind::linear, {20, 20});
  cfg.max_em_iterations = 10;
  const auto model = fit(data, cfg);
  CHECK(model.ensembles[0][0].offset <= model.ensembles[1][0].offset);
  CHECK(model.mean_dwell_time(0) ==
        doctest::Approx(1.0 / (1.0 - model.state_model.gamma(0, 0))));
}

TEST_CASE("predict_parameters") {
  const auto family = make_family("normal");
  FittedModel model;
  model.family_name = "normal";
  model.family = std::shared_ptr<const ResponseFamily>(make_family("normal"));
  model.state_model.gamma = Eigen::MatrixXd::Ones(1, 1);
  model.state_model.delta = Eigen::VectorXd::Ones(1);
  model.ensembles.assign(1, std::vector<PredictorEnsemble>(2));
  model.ensembles[0][0].offset = 1.0;
  model.ensembles[0][1].offset = 0.0;  // log link: eta 0 -> theta 1

  Eigen::MatrixXd X = Eigen::MatrixXd::Random(7, 2);
  auto theta = model.predict_parameters(X);
  for (int t = 0; t < 7; ++t) {
    CHECK(theta[0](t, 0) == 1.0);
    CHECK(theta[0](t, 1) == 1.0);
  }

  // one committed linear update shifts the location predictor
  BaseLearnerFit f;
  f.spec = {LearnerKind::linear, 1, {}};
  f.coef.resize(2);
  f.coef << 0.5, 2.0;
  model.ensembles[0][0].updates.push_back({f, 0.1});
  theta = model.predict_parameters(X);
  for (int t = 0; t < 7; ++t) {
    CHECK(theta[0](t, 0) == doctest::Approx(1.0 + 0.1 * (0.5 + 2.0 * X(t, 1))).epsilon(1e-12));
  }
}

TEST_CASE("fit validates its inputs") {
  Dataset data;
  data.y = Eigen::VectorXd::Ones(10);
  data.X = Eigen::MatrixXd::Random(10, 2);

  auto cfg = base_config("normal", 2, LearnerKind::linear, {5, 5});
  cfg.tolerance = -1.0;
  CHECK_THROWS_AS(fit(data, cfg), InvalidInputError);

  cfg = base_config("normal", 2, LearnerKind::linear, {5});
  CHECK_THROWS_AS(fit(data, cfg), InvalidInputError);

  cfg = base_config("nbinom", 1, LearnerKind::linear, {5});
  Dataset bad = data;
  bad.y(3) = -2.0;  // outside the nbinom support
  CHECK_THROWS_WITH_AS(fit(bad, cfg), doctest::Contains("t=4"), InvalidInputError);
}

TEST_CASE("model JSON round trip preserves predictions bitwise") {
  const auto design = small_nonlinear_design(90, 3);
  const Dataset data = simulate_dataset(design, 5, 0);
  auto cfg = base_config("normal", 2, LearnerKind::pspline, {15, 15});
  cfg.max_em_iterations = 6;
  const auto model = fit(data, cfg);

  const auto doc = model_to_json(model);
  const auto restored = model_from_json(doc);
  const auto theta_a = model.predict_parameters(data.X);
  const auto theta_b = restored.predict_parameters(data.X);
  for (int i = 0; i < 2; ++i) {
    CHECK((theta_a[static_cast<size_t>(i)] - theta_b[static_cast<size_t>(i)]).cwiseAbs().maxCoeff() ==
          0.0);
  }
  CHECK(restored.diagnostics.iterations == model.diagnostics.iterations);

  // serialization is deterministic across repeated fits
  const auto model2 = fit(data, cfg);
  CHECK(model_to_json(model2).dump() == doc.dump());
}
