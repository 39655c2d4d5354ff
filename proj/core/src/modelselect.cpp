// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/modelselect.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Runs fn(i) for i in [0, n) on up to `workers` threads. Results must be
// written into pre-sized slots so aggregation is independent of completion
// order.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (n_threads == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto drain = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_threads - 1));
  for (int t = 0; t + 1 < n_threads; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

}  // namespace

CvPlan CvPlan::random_subsets(int T, int folds, unsigned long long seed) {
  if (folds < 2) throw InvalidInputError("cross-validation needs at least 2 folds");
  if (T < folds) throw InvalidInputError("more folds than observations");
  std::vector<int> idx(static_cast<size_t>(T));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  CvPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignment.assign(static_cast<size_t>(T), 0);
  for (int r = 0; r < T; ++r) {
    plan.assignment[static_cast<size_t>(idx[static_cast<size_t>(r)])] = r % folds;
  }
  return plan;
}

CvPlan CvPlan::contiguous_blocks(int T, int folds) {
  if (folds < 2) throw InvalidInputError("cross-validation needs at least 2 folds");
  if (T < folds) throw InvalidInputError("more folds than observations");
  CvPlan plan;
  plan.folds = folds;
  plan.assignment.assign(static_cast<size_t>(T), 0);
  for (int t = 0; t < T; ++t) {
    plan.assignment[static_cast<size_t>(t)] =
        std::min(folds - 1, static_cast<int>(static_cast<long long>(t) * folds / T));
  }
  return plan;
}

void CvPlan::validate() const {
  if (folds < 2) throw InvalidInputError("cross-validation needs at least 2 folds");
  std::vector<int> count(static_cast<size_t>(folds), 0);
  for (int a : assignment) {
    if (a < 0 || a >= folds) throw InvalidInputError("fold label out of range");
    ++count[static_cast<size_t>(a)];
  }
  for (int f = 0; f < folds; ++f) {
    if (count[static_cast<size_t>(f)] == 0) {
      throw InvalidInputError("fold " + std::to_string(f + 1) + " is empty");
    }
  }
}

double heldout_score(const FittedModel& model, const Dataset& data,
                     const std::vector<bool>& training_mask) {
  const double full = observed_loglik(model, data, nullptr);
  const double training_only = observed_loglik(model, data, &training_mask);
  return full - training_only;
}

CvResult cross_validate(const Dataset& data, const FitConfig& config,
                        const std::vector<std::vector<int>>& grid, const CvPlan& plan,
                        int workers) {
  if (grid.empty()) throw InvalidInputError("cross-validation grid is empty");
  for (const auto& tuple : grid) {
    if (static_cast<int>(tuple.size()) != config.n_states) {
      throw InvalidInputError("grid tuple length must equal the state count");
    }
  }
  plan.validate();
  if (static_cast<Eigen::Index>(plan.assignment.size()) != data.T()) {
    throw InvalidInputError("fold assignment length does not match the dataset");
  }

  // Learner designs depend only on the covariates; prepare them once and
  // share across every fold x grid-point fit.
  const auto sets = prepare_learners(expand_learner_specs(config.learners, data.P()), data.X);

  const size_t n_tuples = grid.size();
  const size_t n_folds = static_cast<size_t>(plan.folds);
  CvResult result;
  result.grid = grid;
  result.fold_scores.assign(n_tuples, std::vector<double>(n_folds, 0.0));
  std::vector<std::vector<std::string>> warnings(n_tuples,
                                                 std::vector<std::string>(n_folds));

  parallel_for(n_tuples * n_folds, workers, [&](size_t task) {
    const size_t g = task / n_folds;
    const int f = static_cast<int>(task % n_folds);
    FitConfig cfg = config;
    cfg.n_stop = grid[g];
    std::vector<bool> mask(static_cast<size_t>(data.T()));
    for (size_t t = 0; t < mask.size(); ++t) mask[t] = plan.assignment[t] != f;
    try {
      const FittedModel model = fit(data, cfg, &mask, &sets);
      result.fold_scores[g][static_cast<size_t>(f)] = heldout_score(model, data, mask);
    } catch (const DegeneracyError& e) {
      result.fold_scores[g][static_cast<size_t>(f)] =
          std::numeric_limits<double>::quiet_NaN();
      warnings[g][static_cast<size_t>(f)] = e.what();
    }
  });

  for (size_t g = 0; g < n_tuples; ++g) {
    for (size_t f = 0; f < n_folds; ++f) {
      if (!warnings[g][f].empty()) {
        std::cerr << "warning: grid point " << g + 1 << ", fold " << f + 1
                  << " skipped: " << warnings[g][f] << "\n";
      }
    }
  }

  result.mean_score.assign(n_tuples, kNegInf);
  for (size_t g = 0; g < n_tuples; ++g) {
    double sum = 0.0;
    int n = 0;
    for (double s : result.fold_scores[g]) {
      if (!std::isnan(s)) {
        sum += s;
        ++n;
      }
    }
    if (n > 0) result.mean_score[g] = sum / n;
  }

  result.chosen = choose_grid_point(result.grid, result.mean_score);
  if (result.mean_score[static_cast<size_t>(result.chosen)] == kNegInf) {
    throw DegeneracyError("every cross-validation fold degenerated");
  }
  return result;
}

int choose_grid_point(const std::vector<std::vector<int>>& grid,
                      const std::vector<double>& mean_score) {
  if (grid.empty() || grid.size() != mean_score.size()) {
    throw InvalidInputError("grid and score table sizes do not match");
  }
  const auto total = [&](size_t g) {
    return std::accumulate(grid[g].begin(), grid[g].end(), 0);
  };
  size_t best = 0;
  for (size_t g = 1; g < grid.size(); ++g) {
    if (mean_score[g] > mean_score[best] ||
        (mean_score[g] == mean_score[best] && total(g) < total(best))) {
      best = g;
    }
  }
  return static_cast<int>(best);
}

StateSelectResult select_states(const Dataset& data, const FitConfig& config_template,
                                const std::vector<int>& candidate_states,
                                const std::map<int, std::vector<std::vector<int>>>& grids,
                                const CvPlan& plan, int workers) {
  if (candidate_states.empty()) throw InvalidInputError("no candidate state counts");
  StateSelectResult out;
  out.candidates = candidate_states;
  for (int N : candidate_states) {
    if (N < 1) throw InvalidInputError("candidate state counts must be >= 1");
    const auto it = grids.find(N);
    if (it == grids.end()) {
      throw InvalidInputError("no n_stop grid given for N=" + std::to_string(N));
    }
    FitConfig cfg = config_template;
    cfg.n_states = N;
    out.details.push_back(cross_validate(data, cfg, it->second, plan, workers));
    out.scores.push_back(out.details.back().mean_score[static_cast<size_t>(out.details.back().chosen)]);
  }
  size_t best = 0;
  for (size_t c = 1; c < out.scores.size(); ++c) {
    if (out.scores[c] > out.scores[best]) best = c;
  }
  out.chosen_n = candidate_states[best];
  return out;
}

}  // namespace msboost
