// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "msboost/baselearners.hpp"

namespace {

using namespace msboost;

Eigen::VectorXd uniform_x(int T) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd x(T);
  for (int t = 0; t < T; ++t) x(t) = unif(rng);
  return x;
}

Eigen::VectorXd noisy_g(int T) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> norm(0.0, 1.0);
  Eigen::VectorXd g(T);
  for (int t = 0; t < T; ++t) g(t) = norm(rng);
  return g;
}

void BM_pspline_prepare(benchmark::State& state) {
  const auto x = uniform_x(static_cast<int>(state.range(0)));
  const BaseLearnerSpec spec{LearnerKind::pspline, 0, {}};
  for (auto _ : state) {
    PreparedLearner learner(spec, x);
    benchmark::DoNotOptimize(learner.lambda());
  }
}
BENCHMARK(BM_pspline_prepare)->Arg(500)->Arg(2000);

void BM_pspline_fit(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto x = uniform_x(T);
  const auto g = noisy_g(T);
  const PreparedLearner learner({LearnerKind::pspline, 0, {}}, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.fit(g).rss);
  }
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_pspline_fit)->Arg(500)->Arg(2000);

void BM_linear_fit(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto x = uniform_x(T);
  const auto g = noisy_g(T);
  const PreparedLearner learner({LearnerKind::linear, 0, {}}, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.fit(g).rss);
  }
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_linear_fit)->Arg(500)->Arg(2000);

}  // namespace
