// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "msboost/errors.hpp"
#include "msboost/hmm.hpp"
#include "oracles.hpp"

using namespace msboost;

namespace {

StateModel two_state(double g12, double g21, double d1 = 0.5) {
  StateModel m;
  m.gamma.resize(2, 2);
  m.gamma << 1.0 - g12, g12, g21, 1.0 - g21;
  m.delta.resize(2);
  m.delta << d1, 1.0 - d1;
  return m;
}

struct RandomInstance {
  StateModel model;
  LogDensityTable logdens;
};

RandomInstance random_instance(int N, int T, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  RandomInstance inst;
  inst.model.gamma.resize(N, N);
  for (int i = 0; i < N; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < N; ++j) {
      inst.model.gamma(i, j) = unif(rng);
      row_sum += inst.model.gamma(i, j);
    }
    inst.model.gamma.row(i) /= row_sum;
  }
  inst.model.delta.resize(N);
  double d_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    inst.model.delta(i) = unif(rng);
    d_sum += inst.model.delta(i);
  }
  inst.model.delta /= d_sum;
  inst.logdens.resize(T, N);
  std::normal_distribution<double> norm(0.0, 1.0);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) inst.logdens(t, i) = norm(rng);
  }
  return inst;
}

}  // namespace

TEST_CASE("state model validation") {
  auto m = two_state(0.1, 0.2);
  CHECK_NOTHROW(m.validate());
  m.gamma(0, 0) = 0.95;
  CHECK_THROWS_AS(m.validate(), InvalidInputError);

  auto st = two_state(0.1, 0.2);
  st.stationary = true;
  CHECK_THROWS_AS(st.validate(), InvalidInputError);
  st.delta = stationary_distribution(st.gamma);
  CHECK_NOTHROW(st.validate());
}

TEST_CASE("stationary distribution") {
  {
    const auto m = two_state(0.05, 0.05);
    const auto delta = stationary_distribution(m.gamma);
    CHECK(delta(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(delta(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    const auto m = two_state(0.1, 0.2);
    const auto delta = stationary_distribution(m.gamma);
    CHECK(delta(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(delta(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const Eigen::VectorXd lhs = m.gamma.transpose() * delta;
    CHECK((lhs - delta).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  {
    const auto delta = stationary_distribution(Eigen::MatrixXd::Ones(1, 1));
    CHECK(delta(0) == doctest::Approx(1.0));
  }
  // reducible chain: two absorbing states
  CHECK_THROWS_AS(stationary_distribution(Eigen::MatrixXd::Identity(2, 2)), DegeneracyError);
}

TEST_CASE("forward trivial cases") {
  {
    StateModel m;
    m.gamma = Eigen::MatrixXd::Ones(1, 1);
    m.delta = Eigen::VectorXd::Ones(1);
    LogDensityTable logdens(4, 1);
    logdens << -1.0, -2.0, -0.5, -3.0;
    const auto res = forward(logdens, m);
    CHECK(res.log_likelihood == doctest::Approx(-6.5).epsilon(1e-14));
  }
  {
    const auto m = two_state(0.5, 0.5);
    LogDensityTable logdens(1, 2);
    logdens << std::log(0.2), std::log(0.4);
    const auto res = forward(logdens, m);
    CHECK(res.log_likelihood == doctest::Approx(std::log(0.3)).epsilon(1e-14));
  }
}

TEST_CASE("backward trivial cases") {
  {
    const auto m = two_state(0.3, 0.4);
    LogDensityTable logdens = Eigen::MatrixXd::Random(5, 2);
    const auto log_beta = backward(logdens, m);
    CHECK(log_beta(4, 0) == 0.0);
    CHECK(log_beta(4, 1) == 0.0);
  }
  {
    StateModel m;
    m.gamma = Eigen::MatrixXd::Ones(1, 1);
    m.delta = Eigen::VectorXd::Ones(1);
    LogDensityTable logdens(4, 1);
    logdens << -1.0, -2.0, -0.5, -3.0;
    const auto log_beta = backward(logdens, m);
    CHECK(log_beta(0, 0) == doctest::Approx(-5.5).epsilon(1e-14));
    CHECK(log_beta(2, 0) == doctest::Approx(-3.0).epsilon(1e-14));
  }
}

TEST_CASE("posterior trivial cases") {
  {
    StateModel m;
    m.gamma = Eigen::MatrixXd::Ones(1, 1);
    m.delta = Eigen::VectorXd::Ones(1);
    LogDensityTable logdens = Eigen::MatrixXd::Constant(4, 1, -1.0);
    const auto fwd = forward(logdens, m);
    const auto w = posteriors(fwd.log_alpha, backward(logdens, m), logdens, m);
    for (int t = 0; t < 4; ++t) CHECK(w.u(t, 0) == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& vt : w.v) CHECK(vt(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // identical densities in both states of a symmetric chain
    const auto m = two_state(0.2, 0.2);
    LogDensityTable logdens = Eigen::MatrixXd::Constant(6, 2, -0.7);
    const auto fwd = forward(logdens, m);
    const auto w = posteriors(fwd.log_alpha, backward(logdens, m), logdens, m);
    for (int t = 0; t < 6; ++t) {
      CHECK(w.u(t, 0) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward, backward and posteriors match exhaustive enumeration") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> n_dist(1, 3), t_dist(2, 6);
  for (int rep = 0; rep < 50; ++rep) {
    const int N = n_dist(rng);
    const int T = t_dist(rng);
    const auto inst = random_instance(N, T, rng);
    const auto truth = oracle::enumerate_hmm(inst.logdens, inst.model.gamma, inst.model.delta);

    const auto fwd = forward(inst.logdens, inst.model);
    CHECK(std::abs(fwd.log_likelihood - truth.loglik) <=
          1e-12 * std::max(1.0, std::abs(truth.loglik)));

    const auto log_beta = backward(inst.logdens, inst.model);
    const auto w = posteriors(fwd.log_alpha, log_beta, inst.logdens, inst.model);
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(w.u(t, i) - truth.u(t, i)) <= 1e-12);
      }
    }
    for (int t = 1; t < T; ++t) {
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
          CHECK(std::abs(w.v[static_cast<size_t>(t - 1)](i, j) -
                         truth.v[static_cast<size_t>(t - 1)](i, j)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("forward-backward consistency and posterior invariants") {
  std::mt19937_64 rng(4711);
  std::uniform_int_distribution<int> n_dist(1, 4), t_dist(2, 50);
  for (int rep = 0; rep < 50; ++rep) {
    const int N = n_dist(rng);
    const int T = t_dist(rng);
    const auto inst = random_instance(N, T, rng);
    const auto fwd = forward(inst.logdens, inst.model);
    const auto log_beta = backward(inst.logdens, inst.model);
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd combined =
          (fwd.log_alpha.row(t) + log_beta.row(t)).transpose();
      CHECK(std::abs(logsumexp(combined) - fwd.log_likelihood) <=
            1e-10 * std::max(1.0, std::abs(fwd.log_likelihood)));
    }
    const auto w = posteriors(fwd.log_alpha, log_beta, inst.logdens, inst.model);
    for (int t = 0; t < T; ++t) {
      CHECK(std::abs(w.u.row(t).sum() - 1.0) <= 1e-10);
    }
    for (int t = 1; t < T; ++t) {
      const auto& vt = w.v[static_cast<size_t>(t - 1)];
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(vt.row(i).sum() - w.u(t - 1, i)) <= 1e-10);
      }
      for (int j = 0; j < N; ++j) {
        CHECK(std::abs(vt.col(j).sum() - w.u(t, j)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("no underflow on long sequences") {
  const auto m = two_state(0.05, 0.05);
  const int T = 100000;
  LogDensityTable logdens = Eigen::MatrixXd::Constant(T, 2, -15.0);
  const auto res = forward(logdens, m);
  CHECK(std::isfinite(res.log_likelihood));
  CHECK(res.log_likelihood == doctest::Approx(-15.0 * T).epsilon(1e-10));
}

TEST_CASE("initial distribution update") {
  PosteriorWeights w;
  w.u.resize(3, 2);
  w.u << 0.3, 0.7, 0.5, 0.5, 0.2, 0.8;
  w.v.assign(2, Eigen::MatrixXd::Constant(2, 2, 0.25));
  const auto delta = update_initial(w);
  CHECK(delta(0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(delta(1) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("transition update") {
  {
    PosteriorWeights w;
    w.u.resize(3, 2);
    w.u.setConstant(0.5);
    Eigen::MatrixXd v1(2, 2), v2(2, 2);
    v1 << 2.0, 0.5, 0.1, 0.4;
    v2 << 1.0, 0.5, 0.2, 0.3;
    w.v = {v1, v2};
    const auto gamma = update_transitions(w);
    CHECK(gamma(0, 0) == doctest::Approx(0.75).epsilon(1e-14));  // (3)/(3+1)
    CHECK(gamma(0, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(gamma.row(1).sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  {
    // mass concentrated on the diagonal gives the identity
    PosteriorWeights w;
    w.u.resize(2, 2);
    w.u.setConstant(0.5);
    Eigen::MatrixXd v(2, 2);
    v << 0.6, 0.0, 0.0, 0.4;
    w.v = {v};
    const auto gamma = update_transitions(w);
    CHECK(gamma(0, 0) == 1.0);
    CHECK(gamma(1, 1) == 1.0);
  }
  {
    // a state with no mass names itself
    PosteriorWeights w;
    w.u.resize(2, 2);
    w.u.setConstant(0.5);
    Eigen::MatrixXd v(2, 2);
    v << 1.0, 0.0, 0.0, 0.0;
    w.v = {v};
    CHECK_THROWS_WITH_AS(update_transitions(w), doctest::Contains("state 2"), DegeneracyError);
  }
  {
    // row-stochastic for random weights
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      PosteriorWeights w;
      w.u.resize(4, 3);
      w.u.setConstant(1.0 / 3.0);
      w.v.clear();
      for (int s = 0; s < 3; ++s) {
        Eigen::MatrixXd v(3, 3);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) v(i, j) = unif(rng);
        }
        w.v.push_back(v / v.sum());
      }
      const auto gamma = update_transitions(w);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(gamma.row(i).sum() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("closed-form updates maximize their CDLL summands") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_dist(2, 3), t_dist(3, 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int N = n_dist(rng);
    const int T = t_dist(rng);
    const auto inst = random_instance(N, T, rng);
    const auto fwd = forward(inst.logdens, inst.model);
    const auto w = posteriors(fwd.log_alpha, backward(inst.logdens, inst.model), inst.logdens,
                              inst.model);

    const auto delta_hat = update_initial(w);
    const auto term_delta = [&](const Eigen::VectorXd& d) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) {
        if (w.u(0, i) > 0.0) s += w.u(0, i) * std::log(d(i));
      }
      return s;
    };
    const double base_delta = term_delta(delta_hat);
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        if (a == b) continue;
        Eigen::VectorXd d = delta_hat;
        const double eps = std::min(1e-3, d(b));
        d(a) += eps;
        d(b) -= eps;
        if (d.minCoeff() < 0.0) continue;
        CHECK(term_delta(d) <= base_delta + 1e-12);
      }
    }

    const auto gamma_hat = update_transitions(w);
    Eigen::MatrixXd totals = Eigen::MatrixXd::Zero(N, N);
    for (const auto& vt : w.v) totals += vt;
    const auto term_gamma_row = [&](int i, const Eigen::VectorXd& row) {
      double s = 0.0;
      for (int j = 0; j < N; ++j) {
        if (totals(i, j) > 0.0) s += totals(i, j) * std::log(row(j));
      }
      return s;
    };
    for (int i = 0; i < N; ++i) {
      const double base = term_gamma_row(i, gamma_hat.row(i).transpose());
      for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
          if (a == b) continue;
          Eigen::VectorXd row = gamma_hat.row(i).transpose();
          const double eps = std::min(1e-3, row(b));
          row(a) += eps;
          row(b) -= eps;
          if (row.minCoeff() < 0.0) continue;
          CHECK(term_gamma_row(i, row) <= base + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("local decoding") {
  PosteriorWeights w;
  w.u.resize(3, 2);
  w.u << 0.9, 0.1, 0.5, 0.5, 0.2, 0.8;
  const auto states = decode_local(w);
  CHECK(states[0] == 0);
  CHECK(states[1] == 0);  // tie broken toward the lowest index
  CHECK(states[2] == 1);

  PosteriorWeights single;
  single.u = Eigen::MatrixXd::Ones(4, 1);
  const auto s1 = decode_local(single);
  for (int s : s1) CHECK(s == 0);
}
