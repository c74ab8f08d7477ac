#include "t2ploc/model_output.hpp"

#include <optional>

#include "t2ploc/error.hpp"

namespace t2p {

namespace {

// End of the balanced object starting at `open`, honoring JSON strings.
std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char ch = s[i];
    if (in_string) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_string = false;
      continue;
    }
    if (ch == '"') in_string = true;
    else if (ch == '{') ++depth;
    else if (ch == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

bool is_ident(char ch) {
  return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
}

// Python-style None outside strings -> null.
std::string normalize_none(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (in_string) {
      out += ch;
      if (ch == '\\' && i + 1 < s.size()) out += s[++i];
      else if (ch == '"') in_string = false;
      continue;
    }
    if (ch == '"') in_string = true;
    if (s.substr(i, 4) == "None" && (i == 0 || !is_ident(s[i - 1])) &&
        (i + 4 == s.size() || !is_ident(s[i + 4]))) {
      out += "null";
      i += 3;
      continue;
    }
    out += ch;
  }
  return out;
}

std::optional<nlohmann::json> first_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    const auto close = matching_brace(text, open);
    if (!close) continue;
    auto doc = nlohmann::json::parse(normalize_none(text.substr(open, *close - open + 1)), nullptr,
                                     /*allow_exceptions=*/false);
    if (doc.is_object()) return doc;
  }
  return std::nullopt;
}

[[noreturn]] void schema(const std::string& why) {
  throw Error(ErrorCode::Schema, "model output schema: " + why);
}

}  // namespace

std::vector<Assignment> assignments_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) schema("'assignments' must be an array");
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& a = doc[i];
    const std::string at = "assignments[" + std::to_string(i) + "]";
    if (!a.is_object()) schema(at + " must be an object");
    if (!a.contains("object_label") || !a["object_label"].is_string()) {
      schema(at + ".object_label must be a string");
    }
    if (!a.contains("grounded") || !a["grounded"].is_boolean()) schema(at + ".grounded must be a bool");
    if (!a.contains("matched_node")) schema(at + ".matched_node is missing");

    Assignment out_a{a["object_label"].get<std::string>(), std::nullopt};
    const auto& node = a["matched_node"];
    if (node.is_number_integer()) {
      if (node.get<long long>() < 0 || node.get<long long>() > INT32_MAX) {
        schema(at + ".matched_node out of range");
      }
      out_a.matched_node = node.get<int>();
    } else if (!(node.is_null() || (node.is_string() && node.get<std::string>() == "None"))) {
      schema(at + ".matched_node must be an int or null");
    }
    if (a["grounded"].get<bool>() != out_a.grounded()) {
      schema(at + ": grounded must be true exactly when matched_node is set");
    }
    out.push_back(std::move(out_a));
  }
  return out;
}

nlohmann::json assignments_to_json(std::span<const Assignment> assignments) {
  auto arr = nlohmann::json::array();
  for (const auto& a : assignments) {
    arr.push_back({{"object_label", a.object_label},
                   {"grounded", a.grounded()},
                   {"matched_node", a.matched_node ? nlohmann::json(*a.matched_node) : nlohmann::json()}});
  }
  return arr;
}

ModelPrediction parse_model_output(std::string_view text, const GeoReference& georef) {
  const auto doc = first_json_object(text);
  if (!doc) throw Error(ErrorCode::NoJson, "model output contains no JSON object");
  if (!doc->contains("assignments")) schema("missing 'assignments'");
  if (!doc->contains("point_2d")) schema("missing 'point_2d'");

  ModelPrediction pred;
  pred.assignments = assignments_from_json((*doc)["assignments"]);
  const auto& pt = (*doc)["point_2d"];
  if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number_integer() || !pt[1].is_number_integer()) {
    schema("'point_2d' must be [int, int]");
  }
  const long long u = pt[0].get<long long>(), v = pt[1].get<long long>();
  if (u < 0 || v < 0 || u >= georef.width_px() || v >= georef.height_px()) {
    throw Error(ErrorCode::OutOfRaster, "point_2d [" + std::to_string(u) + ", " + std::to_string(v) +
                                            "] is outside the raster");
  }
  pred.point_2d = {static_cast<int>(u), static_cast<int>(v)};
  return pred;
}

std::string serialize_prediction(const ModelPrediction& prediction) {
  const nlohmann::json doc{{"assignments", assignments_to_json(prediction.assignments)},
                           {"point_2d", {prediction.point_2d.u, prediction.point_2d.v}}};
  return doc.dump();
}

}  // namespace t2p
