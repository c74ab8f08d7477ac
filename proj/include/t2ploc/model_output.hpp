#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/geometry.hpp"
#include "t2ploc/pna.hpp"

namespace t2p {

/// Structured answer of a localization model.
struct ModelPrediction {
  std::vector<Assignment> assignments;
  PixelCoord point_2d;

  friend bool operator==(const ModelPrediction&, const ModelPrediction&) = default;
};

/// Pulls the first balanced JSON object out of free text (prose and
/// markdown fences are tolerated) and validates it:
///   {"assignments": [{"object_label": str, "grounded": bool,
///                     "matched_node": int | null | "None"}, ...],
///    "point_2d": [int, int]}
/// A bare None is read as null. Throws NoJson, Schema (including a
/// grounded/matched_node mismatch) or OutOfRaster.
ModelPrediction parse_model_output(std::string_view text, const GeoReference& georef);

/// Canonical JSON text of a prediction; parse_model_output inverts it.
std::string serialize_prediction(const ModelPrediction& prediction);

/// Assignment list in the wire schema shared by model output and labels.
nlohmann::json assignments_to_json(std::span<const Assignment> assignments);
/// Throws Schema on any violation.
std::vector<Assignment> assignments_from_json(const nlohmann::json& doc);

}  // namespace t2p
