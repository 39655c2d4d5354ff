// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_MODEL_IO_HPP
#define MSBOOST_MODEL_IO_HPP

#include <nlohmann/json.hpp>
#include <string>

#include "msboost/em.hpp"

namespace msboost {

/// JSON document for a fitted model: family, gamma, delta, per-ensemble
/// offset and update list (learner kind, covariate index, coefficients,
/// step length, knot range), diagnostics. States and parameters are
/// 1-based in the document. Serialization is deterministic: the same model
/// always produces the same bytes, and coefficients survive the round trip
/// exactly.
nlohmann::json model_to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& doc);

void write_model_json(const FittedModel& model, const std::string& path);
FittedModel read_model_json(const std::string& path);

}  // namespace msboost

#endif  // MSBOOST_MODEL_IO_HPP
