#pragma once

#include <string>

#include "json.hpp"

#include "har/cascade.hpp"
#include "har/experiment.hpp"

namespace har {

// Reference values for the cascade's sensing and feature-computation savings
// as published for the 7-activity setup. Shown next to the computed figures,
// never asserted.
inline constexpr double kPublishedSensingSavingsPct = 44.0;
inline constexpr double kPublishedComputeSavingsPct = 42.0;

nlohmann::ordered_json to_json(const EvalReport& r);
nlohmann::ordered_json to_json(const SavingsReport& r);

/// Pretty-printed JSON with fixed key order, newline-terminated.
std::string to_structured(const nlohmann::ordered_json& j);

/// Confusion matrix: header row of predicted labels, one row per true label.
std::string confusion_csv(const EvalReport& r);
std::string savings_csv(const SavingsReport& r);

/// Formats a percentage with two decimals, e.g. "37.71%".
std::string format_pct(double pct);

/// Flat record per node: id, config, t, w and window contents.
nlohmann::ordered_json models_to_json(const Cascade& cascade);
/// Restores node models saved by models_to_json into a cascade built from the same spec.
void load_models(Cascade& cascade, const nlohmann::json& j);

nlohmann::ordered_json model_to_json(const PegasosModel& m);
PegasosModel model_from_json(const nlohmann::json& j);

}  // namespace har
