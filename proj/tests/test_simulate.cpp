// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "msboost/errors.hpp"
#include "msboost/simulate.hpp"

using namespace msboost;

TEST_CASE("chain simulation") {
  Eigen::MatrixXd gamma(2, 2);
  gamma << 0.95, 0.05, 0.05, 0.95;

  SUBCASE("a degenerate initial distribution pins the first state") {
    const Eigen::Vector2d delta(1.0, 0.0);
    for (unsigned long long seed = 0; seed < 20; ++seed) {
      const auto states = simulate_chain(2, gamma, delta, 5, seed);
      CHECK(states[0] == 0);
    }
  }

  SUBCASE("an identity transition matrix freezes the chain") {
    const auto states =
        simulate_chain(2, Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.5, 0.5), 50, 7);
    for (int s : states) CHECK(s == states[0]);
  }

  SUBCASE("empirical transition frequencies approach the truth") {
    const int T = 100000;
    const auto states = simulate_chain(2, gamma, Eigen::Vector2d(0.5, 0.5), T, 12345);
    Eigen::Matrix2d counts = Eigen::Matrix2d::Zero();
    for (size_t t = 1; t < states.size(); ++t) {
      counts(states[t - 1], states[t]) += 1.0;
    }
    for (int i = 0; i < 2; ++i) {
      const double row = counts.row(i).sum();
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(counts(i, j) / row - gamma(i, j)) < 0.01);
      }
    }
  }

  SUBCASE("invalid inputs are rejected") {
    Eigen::MatrixXd bad = gamma;
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(simulate_chain(2, bad, Eigen::Vector2d(0.5, 0.5), 10, 1), InvalidInputError);
  }
}

TEST_CASE("design predictors reproduce the stated formulas") {
  const auto lin = linear_nbinom_design();
  const auto nl = nonlinear_normal_design();
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(100);

  for (double v : {-1.0, 0.0, 1.0}) {
    x(0) = v;
    const double s = std::sin(std::numbers::pi * (v - 0.5));
    CHECK(lin.eta_true[0][0](x) == 2.0 + 2.0 * v);
    CHECK(lin.eta_true[1][0](x) == 2.0 - 2.0 * v);
    CHECK(lin.eta_true[0][1](x) == 2.0 * v);
    CHECK(lin.eta_true[1][1](x) == -2.0 * v);
    CHECK(nl.eta_true[0][0](x) == 2.0 + 2.0 * s);
    CHECK(nl.eta_true[1][0](x) == -2.0 - s);
    CHECK(nl.eta_true[0][1](x) == s);
    CHECK(nl.eta_true[1][1](x) == -2.0 * s);
  }

  // noise covariates carry no signal
  x(0) = 0.3;
  Eigen::RowVectorXd x2 = x;
  x2(57) = -0.9;
  CHECK(lin.eta_true[0][0](x) == lin.eta_true[0][0](x2));
  CHECK(nl.eta_true[1][1](x) == nl.eta_true[1][1](x2));
}

TEST_CASE("response simulation") {
  const auto nl = nonlinear_normal_design();

  SUBCASE("state-1 mean at x1 = 0.5 is exactly 2 (the sine term vanishes)") {
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(100);
    x(0) = 0.5;
    CHECK(nl.eta_true[0][0](x) == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("linear design at x1 = 0: mean e^2, dispersion 1") {
    const auto lin = linear_nbinom_design();
    const auto family = make_family(lin.family);
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(100);
    CHECK(link_invert(family->link(0), lin.eta_true[0][0](x)) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK(link_invert(family->link(1), lin.eta_true[0][1](x)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("same seed, same draw") {
    std::vector<int> states;
    const Dataset a = simulate_dataset(nl, 42, 3, &states);
    const Dataset b = simulate_dataset(nl, 42, 3);
    CHECK(a.y == b.y);
    CHECK(a.X == b.X);
    CHECK(states.size() == static_cast<size_t>(nl.T));
    const Dataset c = simulate_dataset(nl, 42, 4);
    CHECK(a.y != c.y);
  }

  SUBCASE("responses respect the family support") {
    const auto lin = linear_nbinom_design();
    const auto family = make_family(lin.family);
    const Dataset d = simulate_dataset(lin, 9, 0);
    for (int t = 0; t < d.T(); ++t) CHECK(family->in_support(d.y(t)));
  }
}

TEST_CASE("replication runner") {
  // a small custom design keeps the unit test fast; the paper-scale designs
  // run in the acceptance suite
  auto design = nonlinear_normal_design();
  design.T = 150;
  design.P = 4;

  ExperimentConfig config;
  config.replications = 2;
  config.seed = 20260101;
  config.fit.family = design.family;
  config.fit.n_states = 2;
  config.fit.learners = {{LearnerKind::linear, {}}, {LearnerKind::linear, {}}};
  config.fit.n_stop = {25, 25};
  config.fit.max_em_iterations = 20;

  const auto report = run_experiment(design, config);
  CHECK(report.runs.size() == 2);
  CHECK(report.failures == 0);
  CHECK(report.design_name == "nonlinear-normal");
  for (const auto& run : report.runs) {
    CHECK(run.ok);
    CHECK(run.gamma_hat.rows() == 2);
    CHECK(std::abs(run.gamma_hat.row(0).sum() - 1.0) < 1e-12);
    CHECK(run.selected.size() == 2);
    CHECK(run.n_stop_used == std::vector<int>{25, 25});
  }
  CHECK(report.informative_rate >= 0.0);
  CHECK(report.informative_rate <= 1.0);
  CHECK(report.noise_rate >= 0.0);
  CHECK(report.noise_rate <= 1.0);

  // deterministic given config + seed
  const auto report2 = run_experiment(design, config);
  CHECK(report2.runs[0].gamma_hat == report.runs[0].gamma_hat);
  CHECK(report2.runs[1].gamma_hat == report.runs[1].gamma_hat);

  // aggregates are recomputable from the per-run records
  auto recomputed = report;
  recomputed.aggregate(design);
  CHECK(recomputed.gamma_mean == report.gamma_mean);
  CHECK(recomputed.informative_rate == report.informative_rate);

  // workers change the schedule only
  auto par = config;
  par.workers = 2;
  const auto report3 = run_experiment(design, par);
  CHECK(report3.runs[0].gamma_hat == report.runs[0].gamma_hat);

  // the inner cross-validation path stays deterministic
  auto cv_cfg = config;
  cv_cfg.cv_inside = true;
  cv_cfg.cv_grid = {{10, 10}, {25, 25}};
  cv_cfg.cv_folds = 3;
  const auto cv_report = run_experiment(design, cv_cfg);
  CHECK(cv_report.failures == 0);
  for (const auto& run : cv_report.runs) {
    CHECK((run.n_stop_used == std::vector<int>{10, 10} ||
           run.n_stop_used == std::vector<int>{25, 25}));
  }
}
