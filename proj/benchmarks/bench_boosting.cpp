// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "msboost/boosting.hpp"
#include "msboost/simulate.hpp"

namespace {

using namespace msboost;

// One 50-iteration boosting chunk on study-sized data (T=500, P=100),
// the hot path of every M-step.
void BM_boost_state_chunk(benchmark::State& state) {
  auto design = linear_nbinom_design();
  const Dataset data = simulate_dataset(design, 1, 0);
  const auto family = make_family(design.family);

  std::vector<std::vector<BaseLearnerSpec>> specs(2);
  const auto kind =
      state.range(0) == 0 ? LearnerKind::linear : LearnerKind::pspline;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < design.P; ++j) specs[static_cast<size_t>(k)].push_back({kind, j, {}});
  }
  const auto sets = prepare_learners(specs, data.X);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(design.T, 0.5);
  const Eigen::VectorXd offsets = family->initial_offsets(data.y, w);

  BoostConfig cfg;
  cfg.n_stop = 50;
  cfg.reject_nonimproving = false;

  for (auto _ : state) {
    std::vector<PredictorEnsemble> ens(2);
    std::vector<Eigen::VectorXd> eta(2);
    for (int k = 0; k < 2; ++k) {
      ens[static_cast<size_t>(k)].param = k;
      ens[static_cast<size_t>(k)].offset = offsets(k);
      eta[static_cast<size_t>(k)] = Eigen::VectorXd::Constant(design.T, offsets(k));
    }
    benchmark::DoNotOptimize(boost_state(*family, data, w, sets, cfg, ens, eta));
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_stop);
}
BENCHMARK(BM_boost_state_chunk)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
