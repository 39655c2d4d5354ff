// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_MODELSELECT_HPP
#define MSBOOST_MODELSELECT_HPP

#include <map>
#include <vector>

#include "msboost/dataset.hpp"
#include "msboost/em.hpp"

namespace msboost {

/// K-fold partition of the time points. Folds are random subsets by
/// default (seeded, deterministic); contiguous blocks are available for
/// sensitivity checks.
struct CvPlan {
  int folds = 20;
  std::vector<int> assignment;  // length T, labels 0..folds-1
  unsigned long long seed = 1;

  static CvPlan random_subsets(int T, int folds, unsigned long long seed);
  static CvPlan contiguous_blocks(int T, int folds);
  void validate() const;
};

struct CvResult {
  std::vector<std::vector<int>> grid;            // n_stop tuples, one entry per state
  std::vector<std::vector<double>> fold_scores;  // [tuple][fold], NaN = skipped
  std::vector<double> mean_score;                // per tuple
  int chosen = -1;                               // index into grid

  const std::vector<int>& chosen_tuple() const { return grid[static_cast<size_t>(chosen)]; }
};

/// Cross-validates the stopping iterations over an exhaustive grid: per
/// fold, the held-out time points are masked during training and scored by
/// the information the forward algorithm attributes to them. The chosen
/// tuple attains the maximum mean score; ties go to the smallest total
/// number of iterations. Folds on which estimation degenerates are skipped
/// for that grid point with a warning.
CvResult cross_validate(const Dataset& data, const FitConfig& config,
                        const std::vector<std::vector<int>>& grid,
                        const CvPlan& plan, int workers = 1);

struct StateSelectResult {
  std::vector<int> candidates;
  std::vector<double> scores;     // best CV score per candidate N
  std::vector<CvResult> details;  // per candidate
  int chosen_n = 0;
};

/// State-count selection by cross-validated likelihood: runs
/// cross_validate for each candidate N (with a per-N grid) and returns the
/// N with the best score together with the full score table.
StateSelectResult select_states(const Dataset& data, const FitConfig& config_template,
                                const std::vector<int>& candidate_states,
                                const std::map<int, std::vector<std::vector<int>>>& grids,
                                const CvPlan& plan, int workers = 1);

/// Out-of-sample log-likelihood attributed to the masked time points:
/// full-sequence forward log-likelihood minus the forward log-likelihood
/// with the held-out density rows replaced by the identity.
double heldout_score(const FittedModel& model, const Dataset& data,
                     const std::vector<bool>& training_mask);

/// argmax of the mean score; ties go to the smallest total n_stop, then to
/// the lowest grid index.
int choose_grid_point(const std::vector<std::vector<int>>& grid,
                      const std::vector<double>& mean_score);

}  // namespace msboost

#endif  // MSBOOST_MODELSELECT_HPP
