// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "msboost/hmm.hpp"

namespace {

using namespace msboost;

struct Instance {
  StateModel model;
  LogDensityTable logdens;
};

Instance make_instance(int T, int N) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);
  Instance inst;
  inst.model.gamma.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) inst.model.gamma(i, j) = unif(rng);
    inst.model.gamma.row(i) /= inst.model.gamma.row(i).sum();
  }
  inst.model.delta = Eigen::VectorXd::Constant(N, 1.0 / N);
  inst.logdens.resize(T, N);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) inst.logdens(t, i) = norm(rng);
  }
  return inst;
}

void BM_forward(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(inst.logdens, inst.model).log_likelihood);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_forward)->Args({500, 2})->Args({2000, 2})->Args({2000, 4});

void BM_forward_backward_posteriors(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const auto fwd = forward(inst.logdens, inst.model);
    const auto log_beta = backward(inst.logdens, inst.model);
    const auto w = posteriors(fwd.log_alpha, log_beta, inst.logdens, inst.model);
    benchmark::DoNotOptimize(w.u(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_forward_backward_posteriors)->Args({500, 2})->Args({2000, 2})->Args({2000, 4});

}  // namespace
