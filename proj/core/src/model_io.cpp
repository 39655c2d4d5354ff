// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/model_io.hpp"

#include <fstream>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto R = rows.size();
  const auto C = R > 0 ? rows[0].size() : 0;
  Eigen::MatrixXd m(R, C);
  for (size_t i = 0; i < R; ++i) {
    if (rows[i].size() != C) throw InvalidInputError("ragged matrix in model document");
    for (size_t j = 0; j < C; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

std::string kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::intercept: return "intercept";
    case LearnerKind::linear: return "linear";
    case LearnerKind::pspline: return "pspline";
  }
  return "?";
}

LearnerKind kind_from_name(const std::string& s) {
  if (s == "intercept") return LearnerKind::intercept;
  if (s == "linear") return LearnerKind::linear;
  if (s == "pspline") return LearnerKind::pspline;
  throw InvalidInputError("unknown base-learner kind '" + s + "' in model document");
}

json update_to_json(const EnsembleUpdate& u) {
  json j;
  j["kind"] = kind_name(u.fit.spec.kind);
  j["covariate"] = u.fit.spec.covariate + 1;  // 1-based in the document
  j["coef"] = vector_to_json(u.fit.coef);
  j["step_length"] = u.step_length;
  if (u.fit.spec.kind == LearnerKind::pspline) {
    j["degree"] = u.fit.spec.pspline.degree;
    j["interior_knots"] = u.fit.spec.pspline.interior_knots;
    j["penalty_order"] = u.fit.spec.pspline.penalty_order;
    j["target_df"] = u.fit.spec.pspline.target_df;
    j["x_min"] = u.fit.x_min;
    j["x_max"] = u.fit.x_max;
  }
  return j;
}

EnsembleUpdate update_from_json(const json& j) {
  EnsembleUpdate u;
  u.fit.spec.kind = kind_from_name(j.at("kind").get<std::string>());
  u.fit.spec.covariate = j.at("covariate").get<int>() - 1;
  u.fit.coef = vector_from_json(j.at("coef"));
  u.step_length = j.at("step_length").get<double>();
  if (u.fit.spec.kind == LearnerKind::pspline) {
    u.fit.spec.pspline.degree = j.at("degree").get<int>();
    u.fit.spec.pspline.interior_knots = j.at("interior_knots").get<int>();
    u.fit.spec.pspline.penalty_order = j.at("penalty_order").get<int>();
    u.fit.spec.pspline.target_df = j.at("target_df").get<double>();
    u.fit.x_min = j.at("x_min").get<double>();
    u.fit.x_max = j.at("x_max").get<double>();
  }
  return u;
}

}  // namespace

nlohmann::json model_to_json(const FittedModel& model) {
  json doc;
  doc["format"] = "msboost-model";
  doc["version"] = 1;
  doc["family"] = model.family_name;
  doc["n_states"] = model.n_states();
  doc["stationary"] = model.state_model.stationary;
  doc["gamma"] = matrix_to_json(model.state_model.gamma);
  doc["delta"] = vector_to_json(model.state_model.delta);

  json ens = json::array();
  for (const auto& row : model.ensembles) {
    for (const auto& e : row) {
      json je;
      je["state"] = e.state + 1;
      je["param"] = e.param + 1;
      je["offset"] = e.offset;
      json ups = json::array();
      for (const auto& u : e.updates) ups.push_back(update_to_json(u));
      je["updates"] = std::move(ups);
      ens.push_back(std::move(je));
    }
  }
  doc["ensembles"] = std::move(ens);

  json diag;
  diag["loglik_trace"] = model.diagnostics.loglik_trace;
  diag["cdll_trace"] = model.diagnostics.cdll_trace;
  diag["iterations"] = model.diagnostics.iterations;
  diag["converged"] = model.diagnostics.converged;
  doc["diagnostics"] = std::move(diag);
  return doc;
}

FittedModel model_from_json(const nlohmann::json& doc) {
  if (doc.value("format", "") != "msboost-model") {
    throw InvalidInputError("not a msboost model document");
  }
  FittedModel model;
  model.family_name = doc.at("family").get<std::string>();
  model.family = std::shared_ptr<const ResponseFamily>(make_family(model.family_name));
  model.state_model.gamma = matrix_from_json(doc.at("gamma"));
  model.state_model.delta = vector_from_json(doc.at("delta"));
  model.state_model.stationary = doc.at("stationary").get<bool>();
  model.state_model.validate();

  const int N = model.n_states();
  const int K = model.family->param_count();
  model.ensembles.assign(static_cast<size_t>(N),
                         std::vector<PredictorEnsemble>(static_cast<size_t>(K)));
  for (const auto& je : doc.at("ensembles")) {
    const int i = je.at("state").get<int>() - 1;
    const int k = je.at("param").get<int>() - 1;
    if (i < 0 || i >= N || k < 0 || k >= K) {
      throw InvalidInputError("ensemble with out-of-range state/param in model document");
    }
    auto& e = model.ensembles[static_cast<size_t>(i)][static_cast<size_t>(k)];
    e.state = i;
    e.param = k;
    e.offset = je.at("offset").get<double>();
    for (const auto& ju : je.at("updates")) e.updates.push_back(update_from_json(ju));
  }

  if (doc.contains("diagnostics")) {
    const auto& diag = doc.at("diagnostics");
    model.diagnostics.loglik_trace = diag.value("loglik_trace", std::vector<double>{});
    model.diagnostics.cdll_trace = diag.value("cdll_trace", std::vector<double>{});
    model.diagnostics.iterations = diag.value("iterations", 0);
    model.diagnostics.converged = diag.value("converged", false);
  }
  return model;
}

void write_model_json(const FittedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  out << model_to_json(model).dump(2) << "\n";
}

FittedModel read_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("cannot parse '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace msboost
