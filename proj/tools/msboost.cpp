// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0
//
// msboost CLI: fit, cv, decode, predict-quantiles, simulate and replicate
// subcommands around the core library. Every command reads a flat JSON
// config, writes CSV/JSON artifacts into --out and exits non-zero with a
// machine-readable error record on any failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "msboost/dataset.hpp"
#include "msboost/em.hpp"
#include "msboost/errors.hpp"
#include "msboost/model_io.hpp"
#include "msboost/modelselect.hpp"
#include "msboost/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace msboost;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  unsigned long long seed = 1;
  bool seed_given = false;
  int workers = 1;
  bool exact_paper = false;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json load_config(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open config '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw InvalidInputError("cannot parse config '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw InvalidInputError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw InvalidInputError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

LearnerKind parse_kind(const std::string& s) {
  if (s == "intercept") return LearnerKind::intercept;
  if (s == "linear") return LearnerKind::linear;
  if (s == "pspline") return LearnerKind::pspline;
  throw InvalidInputError("unknown base-learner kind '" + s +
                          "' (available: intercept, linear, pspline)");
}

const std::set<std::string> kFitKeys = {
    "data",      "family",       "n_states",          "learners",
    "n_stop",    "step_length",  "stationary",        "tolerance",
    "max_em_iterations",         "seed",              "pspline_degree",
    "pspline_interior_knots",    "pspline_penalty_order", "pspline_df"};

std::set<std::string> with_extra(std::set<std::string> base,
                                 const std::set<std::string>& extra) {
  base.insert(extra.begin(), extra.end());
  return base;
}

FitConfig parse_fit_config(const json& cfg, const CliOptions& opts, int K) {
  FitConfig fc;
  fc.family = cfg.value("family", std::string("normal"));
  fc.n_states = cfg.value("n_states", 2);
  fc.step_length = cfg.value("step_length", 0.1);
  fc.stationary = cfg.value("stationary", false);
  fc.tolerance = cfg.value("tolerance", 1e-6);
  fc.max_em_iterations = cfg.value("max_em_iterations", 100);
  fc.exact_paper = opts.exact_paper;
  fc.seed = opts.seed_given ? opts.seed : cfg.value("seed", 1ull);

  PsplineParams ps;
  ps.degree = cfg.value("pspline_degree", 3);
  ps.interior_knots = cfg.value("pspline_interior_knots", 20);
  ps.penalty_order = cfg.value("pspline_penalty_order", 2);
  ps.target_df = cfg.value("pspline_df", 4.0);

  std::vector<std::string> kinds(static_cast<size_t>(K), "linear");
  if (cfg.contains("learners")) {
    kinds = cfg.at("learners").get<std::vector<std::string>>();
    if (static_cast<int>(kinds.size()) != K) {
      throw InvalidInputError("'learners' needs one entry per distribution parameter");
    }
  }
  for (const auto& kind : kinds) fc.learners.push_back({parse_kind(kind), ps});

  if (cfg.contains("n_stop")) {
    fc.n_stop = cfg.at("n_stop").get<std::vector<int>>();
  } else {
    fc.n_stop.assign(static_cast<size_t>(fc.n_states), 100);
  }
  return fc;
}

Dataset load_data(const json& cfg) {
  if (!cfg.contains("data")) throw InvalidInputError("config needs a 'data' path");
  return read_dataset_csv(cfg.at("data").get<std::string>());
}

fs::path out_file(const CliOptions& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return fs::path(opts.out_dir) / name;
}

void write_diagnostics_csv(const FittedModel& model, const fs::path& path) {
  std::ofstream out(path);
  out << "iteration,loglik,cdll\n";
  for (size_t i = 0; i < model.diagnostics.loglik_trace.size(); ++i) {
    out << i + 1 << "," << fmt_double(model.diagnostics.loglik_trace[i]) << ","
        << fmt_double(model.diagnostics.cdll_trace[i]) << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_fit(const CliOptions& opts) {
  const json cfg = load_config(opts.config_path, kFitKeys);
  const Dataset data = load_data(cfg);
  const int K = make_family(cfg.value("family", std::string("normal")))->param_count();
  const FitConfig fc = parse_fit_config(cfg, opts, K);

  const FittedModel model = fit(data, fc);
  write_model_json(model, out_file(opts, "model.json").string());
  write_diagnostics_csv(model, out_file(opts, "diagnostics.csv"));

  json summary;
  summary["log_likelihood"] = model.diagnostics.loglik_trace.back();
  summary["iterations"] = model.diagnostics.iterations;
  summary["converged"] = model.diagnostics.converged;
  for (int i = 0; i < model.n_states(); ++i) {
    summary["mean_dwell_time"].push_back(model.mean_dwell_time(i));
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_cv(const CliOptions& opts) {
  const json cfg = load_config(
      opts.config_path,
      with_extra(kFitKeys, {"n_stop_grid", "folds", "cv_scheme", "candidate_states"}));
  const Dataset data = load_data(cfg);
  const int K = make_family(cfg.value("family", std::string("normal")))->param_count();
  FitConfig fc = parse_fit_config(cfg, opts, K);

  if (!cfg.contains("n_stop_grid")) throw InvalidInputError("config needs 'n_stop_grid'");
  const auto per_state = cfg.at("n_stop_grid").get<std::vector<int>>();
  if (per_state.empty()) throw InvalidInputError("'n_stop_grid' is empty");

  const int folds = cfg.value("folds", 20);
  const std::string scheme = cfg.value("cv_scheme", std::string("random"));
  const auto make_plan = [&](int T) {
    if (scheme == "random") return CvPlan::random_subsets(T, folds, fc.seed);
    if (scheme == "blocks") return CvPlan::contiguous_blocks(T, folds);
    throw InvalidInputError("unknown cv_scheme '" + scheme + "'");
  };
  const CvPlan plan = make_plan(static_cast<int>(data.T()));

  // The grid is the Cartesian product of the same per-state list.
  const auto product_grid = [&](int N) {
    std::vector<std::vector<int>> grid;
    std::vector<size_t> idx(static_cast<size_t>(N), 0);
    while (true) {
      std::vector<int> tuple;
      for (int i = 0; i < N; ++i) tuple.push_back(per_state[idx[static_cast<size_t>(i)]]);
      grid.push_back(std::move(tuple));
      int pos = N - 1;
      while (pos >= 0 && ++idx[static_cast<size_t>(pos)] == per_state.size()) {
        idx[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
    return grid;
  };

  if (cfg.contains("candidate_states")) {
    const auto candidates = cfg.at("candidate_states").get<std::vector<int>>();
    std::map<int, std::vector<std::vector<int>>> grids;
    for (int N : candidates) grids[N] = product_grid(N);
    const auto res = select_states(data, fc, candidates, grids, plan, opts.workers);

    std::ofstream out(out_file(opts, "states.csv"));
    out << "n_states,score\n";
    for (size_t c = 0; c < res.candidates.size(); ++c) {
      out << res.candidates[c] << "," << fmt_double(res.scores[c]) << "\n";
    }
    json summary;
    summary["chosen_n_states"] = res.chosen_n;
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  const auto result = cross_validate(data, fc, product_grid(fc.n_states), plan, opts.workers);

  std::ofstream out(out_file(opts, "cv.csv"));
  for (int i = 0; i < fc.n_states; ++i) out << "n_stop_" << i + 1 << ",";
  for (int f = 0; f < plan.folds; ++f) out << "fold_" << f + 1 << ",";
  out << "mean\n";
  for (size_t g = 0; g < result.grid.size(); ++g) {
    for (int v : result.grid[g]) out << v << ",";
    for (double s : result.fold_scores[g]) out << fmt_double(s) << ",";
    out << fmt_double(result.mean_score[g]) << "\n";
  }

  json summary;
  summary["chosen_n_stop"] = result.chosen_tuple();
  summary["score"] = result.mean_score[static_cast<size_t>(result.chosen)];
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_decode(const CliOptions& opts) {
  const json cfg = load_config(opts.config_path, {"data", "model"});
  const Dataset data = load_data(cfg);
  if (!cfg.contains("model")) throw InvalidInputError("config needs a 'model' path");
  const FittedModel model = read_model_json(cfg.at("model").get<std::string>());

  const LogDensityTable logdens = model.log_density_table(data);
  const auto fwd = forward(logdens, model.state_model);
  const auto log_beta = backward(logdens, model.state_model);
  const auto weights = posteriors(fwd.log_alpha, log_beta, logdens, model.state_model);
  const auto states = decode_local(weights);

  std::ofstream out(out_file(opts, "decode.csv"));
  out << "t";
  for (int i = 0; i < model.n_states(); ++i) out << ",u_" << i + 1;
  out << ",state\n";
  for (Eigen::Index t = 0; t < data.T(); ++t) {
    out << t + 1;
    for (int i = 0; i < model.n_states(); ++i) out << "," << fmt_double(weights.u(t, i));
    out << "," << states[static_cast<size_t>(t)] + 1 << "\n";
  }

  json summary;
  summary["log_likelihood"] = fwd.log_likelihood;
  for (int i = 0; i < model.n_states(); ++i) {
    const auto n = std::count(states.begin(), states.end(), i);
    summary["state_occupancy"].push_back(static_cast<double>(n) /
                                         static_cast<double>(states.size()));
    summary["mean_dwell_time"].push_back(model.mean_dwell_time(i));
  }
  std::ofstream sout(out_file(opts, "decode_summary.json"));
  sout << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_predict_quantiles(const CliOptions& opts) {
  const json cfg = load_config(opts.config_path,
                               {"data", "model", "grid_covariate", "grid_points", "grid_min",
                                "grid_max", "quantiles"});
  const Dataset data = load_data(cfg);
  if (!cfg.contains("model")) throw InvalidInputError("config needs a 'model' path");
  const FittedModel model = read_model_json(cfg.at("model").get<std::string>());

  const int covariate = cfg.value("grid_covariate", 1) - 1;
  if (covariate < 0 || covariate >= data.P()) {
    throw InvalidInputError("grid_covariate out of range");
  }
  const int n_points = cfg.value("grid_points", 101);
  const double lo = cfg.value("grid_min", data.X.col(covariate).minCoeff());
  const double hi = cfg.value("grid_max", data.X.col(covariate).maxCoeff());
  std::vector<double> levels = {0.05, 0.15, 0.25, 0.75, 0.85, 0.95};
  if (cfg.contains("quantiles")) levels = cfg.at("quantiles").get<std::vector<double>>();

  // remaining covariates are held at their training means
  Eigen::RowVectorXd base = data.X.colwise().mean();
  Eigen::MatrixXd grid(n_points, data.P());
  for (int r = 0; r < n_points; ++r) {
    grid.row(r) = base;
    grid(r, covariate) = lo + (hi - lo) * r / (n_points - 1);
  }
  const auto theta = model.predict_parameters(grid);

  std::ofstream out(out_file(opts, "quantiles.csv"));
  out << "x,state,mean";
  for (double p : levels) out << ",q" << p;
  out << "\n";
  for (int r = 0; r < n_points; ++r) {
    for (int i = 0; i < model.n_states(); ++i) {
      const Eigen::VectorXd th = theta[static_cast<size_t>(i)].row(r).transpose();
      out << fmt_double(grid(r, covariate)) << "," << i + 1 << "," << fmt_double(th(0));
      for (double p : levels) out << "," << fmt_double(model.family->quantile(th, p));
      out << "\n";
    }
  }
  return 0;
}

ExperimentDesign design_by_name(const std::string& name) {
  if (name == "linear-nbinom") return linear_nbinom_design();
  if (name == "nonlinear-normal") return nonlinear_normal_design();
  throw InvalidInputError("unknown design '" + name +
                          "' (available: linear-nbinom, nonlinear-normal, custom)");
}

ExperimentDesign parse_design(const json& cfg) {
  const std::string name = cfg.value("design", std::string("linear-nbinom"));
  if (name != "custom") {
    auto design = design_by_name(name);
    design.T = cfg.value("T", design.T);
    design.P = cfg.value("P", design.P);
    return design;
  }

  ExperimentDesign d;
  d.name = "custom";
  d.family = cfg.value("family", std::string("normal"));
  d.T = cfg.value("T", 500);
  const auto family = make_family(d.family);
  const int K = family->param_count();

  const auto gamma_rows = cfg.at("gamma").get<std::vector<std::vector<double>>>();
  d.N = static_cast<int>(gamma_rows.size());
  d.gamma.resize(d.N, d.N);
  for (int i = 0; i < d.N; ++i) {
    if (static_cast<int>(gamma_rows[static_cast<size_t>(i)].size()) != d.N) {
      throw InvalidInputError("'gamma' must be square");
    }
    for (int j = 0; j < d.N; ++j) d.gamma(i, j) = gamma_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  const auto delta = cfg.at("delta").get<std::vector<double>>();
  d.delta = Eigen::Map<const Eigen::VectorXd>(delta.data(), static_cast<Eigen::Index>(delta.size()));

  // per state x parameter linear predictors: eta<k>_state<i> = [intercept,
  // slope_1, ..., slope_P]
  d.eta_true.resize(static_cast<size_t>(d.N));
  int P = -1;
  for (int i = 0; i < d.N; ++i) {
    for (int k = 0; k < K; ++k) {
      const std::string key = "eta" + std::to_string(k + 1) + "_state" + std::to_string(i + 1);
      if (!cfg.contains(key)) throw InvalidInputError("custom design needs '" + key + "'");
      const auto coef = cfg.at(key).get<std::vector<double>>();
      if (P < 0) P = static_cast<int>(coef.size()) - 1;
      if (static_cast<int>(coef.size()) != P + 1) {
        throw InvalidInputError("'" + key + "' length disagrees with the other predictors");
      }
      d.eta_true[static_cast<size_t>(i)].push_back(
          [coef](const Eigen::RowVectorXd& x) {
            double eta = coef[0];
            for (size_t j = 1; j < coef.size(); ++j) eta += coef[j] * x(static_cast<Eigen::Index>(j - 1));
            return eta;
          });
    }
  }
  d.P = P;
  // covariates with any non-zero slope are informative
  for (int j = 0; j < P; ++j) {
    bool used = false;
    for (int i = 0; i < d.N; ++i) {
      for (int k = 0; k < K; ++k) {
        const std::string key = "eta" + std::to_string(k + 1) + "_state" + std::to_string(i + 1);
        if (cfg.at(key).get<std::vector<double>>()[static_cast<size_t>(j + 1)] != 0.0) used = true;
      }
    }
    if (used) d.informative.push_back(j);
  }
  return d;
}

const std::set<std::string> kDesignKeys = {"design", "T",     "P",         "family",
                                           "gamma",  "delta", "eta1_state1", "eta1_state2",
                                           "eta2_state1",     "eta2_state2"};

int cmd_simulate(const CliOptions& opts) {
  const json cfg = load_config(opts.config_path, kDesignKeys);
  const ExperimentDesign design = parse_design(cfg);
  std::vector<int> states;
  const Dataset data = simulate_dataset(design, opts.seed, 0, &states);

  std::ofstream out(out_file(opts, "simulated.csv"));
  out << "y";
  for (int j = 0; j < design.P; ++j) out << ",x" << j + 1;
  out << "\n";
  for (Eigen::Index t = 0; t < data.T(); ++t) {
    out << fmt_double(data.y(t));
    for (int j = 0; j < design.P; ++j) out << "," << fmt_double(data.X(t, j));
    out << "\n";
  }
  std::ofstream sout(out_file(opts, "states.csv"));
  sout << "t,state\n";
  for (size_t t = 0; t < states.size(); ++t) sout << t + 1 << "," << states[t] + 1 << "\n";
  return 0;
}

int cmd_replicate(const CliOptions& opts) {
  const json cfg = load_config(
      opts.config_path,
      with_extra(kFitKeys, {"experiment", "replications", "T", "P", "cv_inside", "n_stop_grid",
                            "folds", "save_models"}));
  const std::string experiment = cfg.value("experiment", std::string("linear-nbinom"));
  auto design = design_by_name(experiment);
  design.T = cfg.value("T", design.T);
  design.P = cfg.value("P", design.P);

  ExperimentConfig ec;
  ec.replications = cfg.value("replications", 100);
  ec.seed = opts.seed_given ? opts.seed : cfg.value("seed", 1ull);
  ec.workers = opts.workers;

  if (cfg.value("save_models", false)) {
    fs::create_directories(opts.out_dir);
    ec.save_dir = opts.out_dir;
  }

  json fit_cfg = cfg;
  for (const auto& key : {"experiment", "replications", "T", "P", "cv_inside", "n_stop_grid",
                          "folds", "save_models"}) {
    fit_cfg.erase(key);
  }
  fit_cfg["family"] = design.family;
  fit_cfg["n_states"] = design.N;
  if (!fit_cfg.contains("learners")) {
    const std::string kind = experiment == "linear-nbinom" ? "linear" : "pspline";
    fit_cfg["learners"] = std::vector<std::string>{kind, kind};
  }
  if (!fit_cfg.contains("n_stop")) {
    // cross-validated averages reported for the two study designs
    fit_cfg["n_stop"] = experiment == "linear-nbinom" ? std::vector<int>{435, 468}
                                                      : std::vector<int>{142, 177};
  }
  ec.fit = parse_fit_config(fit_cfg, opts, make_family(design.family)->param_count());

  ec.cv_inside = cfg.value("cv_inside", false);
  if (ec.cv_inside) {
    if (!cfg.contains("n_stop_grid")) {
      throw InvalidInputError("cv_inside requires 'n_stop_grid'");
    }
    const auto per_state = cfg.at("n_stop_grid").get<std::vector<int>>();
    std::vector<size_t> idx(static_cast<size_t>(design.N), 0);
    while (true) {
      std::vector<int> tuple;
      for (int i = 0; i < design.N; ++i) tuple.push_back(per_state[idx[static_cast<size_t>(i)]]);
      ec.cv_grid.push_back(std::move(tuple));
      int pos = design.N - 1;
      while (pos >= 0 && ++idx[static_cast<size_t>(pos)] == per_state.size()) {
        idx[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
    ec.cv_folds = cfg.value("folds", 20);
  }

  const ReplicationReport report = run_experiment(design, ec);

  std::ofstream out(out_file(opts, "report.csv"));
  out << "replication,ok";
  for (int i = 0; i < design.N; ++i) {
    for (int j = 0; j < design.N; ++j) {
      if (i != j) out << ",gamma_" << i + 1 << j + 1;
    }
  }
  for (int i = 0; i < design.N; ++i) out << ",n_stop_" << i + 1;
  out << ",error\n";
  for (const auto& run : report.runs) {
    out << run.replication + 1 << "," << (run.ok ? 1 : 0);
    for (int i = 0; i < design.N; ++i) {
      for (int j = 0; j < design.N; ++j) {
        if (i != j) out << "," << (run.ok ? fmt_double(run.gamma_hat(i, j)) : "");
      }
    }
    for (int i = 0; i < design.N; ++i) {
      out << "," << (run.ok ? std::to_string(run.n_stop_used[static_cast<size_t>(i)]) : "");
    }
    out << "," << run.error << "\n";
  }

  std::ofstream sel(out_file(opts, "selection.csv"));
  sel << "replication,state,param,covariate,selected\n";
  for (const auto& run : report.runs) {
    if (!run.ok) continue;
    for (int i = 0; i < design.N; ++i) {
      for (size_t k = 0; k < run.selected[static_cast<size_t>(i)].size(); ++k) {
        for (int j = 0; j < design.P; ++j) {
          sel << run.replication + 1 << "," << i + 1 << "," << k + 1 << "," << j + 1 << ","
              << (run.selected[static_cast<size_t>(i)][k][static_cast<size_t>(j)] ? 1 : 0)
              << "\n";
        }
      }
    }
  }

  json summary;
  summary["design"] = report.design_name;
  summary["replications"] = ec.replications;
  summary["failures"] = report.failures;
  for (int i = 0; i < design.N; ++i) {
    for (int j = 0; j < design.N; ++j) {
      if (i == j) continue;
      const std::string key = "gamma_" + std::to_string(i + 1) + std::to_string(j + 1);
      summary[key + "_mean"] = report.gamma_mean(i, j);
      summary[key + "_sd"] = report.gamma_sd(i, j);
    }
  }
  summary["informative_selection_rate"] = report.informative_rate;
  summary["noise_selection_rate"] = report.noise_rate;
  for (size_t k = 0; k < report.informative_rate_per_param.size(); ++k) {
    summary["informative_rate_param" + std::to_string(k + 1)] =
        report.informative_rate_per_param[k];
    summary["noise_rate_param" + std::to_string(k + 1)] = report.noise_rate_per_param[k];
  }
  std::ofstream sout(out_file(opts, "summary.json"));
  sout << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov-switching distributional regression via EM-wrapped "
               "component-wise gradient boosting"};
  app.require_subcommand(1);

  CliOptions opts;
  const auto add_common = [&](CLI::App* sub, bool workers = false) {
    sub->add_option("--config", opts.config_path, "flat JSON config")->required();
    sub->add_option("--out", opts.out_dir, "output directory (default .)");
    auto* seed_opt = sub->add_option("--seed", opts.seed, "RNG seed (overrides config)");
    sub->callback([&, seed_opt]() { opts.seed_given = seed_opt->count() > 0; });
    if (workers) sub->add_option("--workers", opts.workers, "worker threads");
    sub->add_flag("--exact-paper", opts.exact_paper,
                  "run fixed n_stop without the non-increase rejection rule");
  };

  auto* fit_cmd = app.add_subcommand("fit", "fit a model and write model.json");
  add_common(fit_cmd);
  auto* cv_cmd = app.add_subcommand("cv", "cross-validate stopping iterations (or state counts)");
  add_common(cv_cmd, true);
  auto* decode_cmd = app.add_subcommand("decode", "posterior probabilities and local decoding");
  add_common(decode_cmd);
  auto* pq_cmd = app.add_subcommand("predict-quantiles",
                                    "state-dependent means and quantiles on a covariate grid");
  add_common(pq_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "draw a dataset from a named or custom design");
  add_common(sim_cmd);
  auto* rep_cmd = app.add_subcommand("replicate", "run a replication study end-to-end");
  add_common(rep_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fit_cmd)) return cmd_fit(opts);
    if (app.got_subcommand(cv_cmd)) return cmd_cv(opts);
    if (app.got_subcommand(decode_cmd)) return cmd_decode(opts);
    if (app.got_subcommand(pq_cmd)) return cmd_predict_quantiles(opts);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(opts);
    if (app.got_subcommand(rep_cmd)) return cmd_replicate(opts);
  } catch (const std::exception& e) {
    json err;
    err["error"] = "failure";
    if (dynamic_cast<const InvalidInputError*>(&e)) err["error"] = "invalid-input";
    if (dynamic_cast<const DegeneracyError*>(&e)) err["error"] = "estimation-degeneracy";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 1;
}
