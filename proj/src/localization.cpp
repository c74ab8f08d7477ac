#include "t2ploc/localization.hpp"

#include "t2ploc/error.hpp"
#include "t2ploc/model_output.hpp"

namespace t2p {

std::string_view method_name(Method m) noexcept { return m == Method::Oracle ? "oracle" : "vlm"; }

Method parse_method(std::string_view s) {
  if (s == "oracle") return Method::Oracle;
  if (s == "vlm") return Method::Vlm;
  throw Error(ErrorCode::InvalidArgument, "method must be 'oracle' or 'vlm'", "method");
}

nlohmann::json result_to_json(const LocalizationResult& r) {
  nlohmann::json doc{{"query_id", r.query_id},
                     {"method", method_name(r.method)},
                     {"ok", r.ok},
                     {"assignments", assignments_to_json(r.assignments)},
                     {"attempts", r.attempts}};
  if (r.ok) {
    doc["predicted_world"] = {r.predicted_world.x, r.predicted_world.y};
    doc["predicted_pixel"] = {r.predicted_pixel.u, r.predicted_pixel.v};
  } else {
    doc["predicted_world"] = nullptr;
    doc["predicted_pixel"] = nullptr;
    doc["failure"] = r.failure;
  }
  if (r.method == Method::Vlm) doc["raw_output"] = r.raw_output;
  if (r.error_m) doc["error_m"] = *r.error_m;
  return doc;
}

LocalizationResult result_from_json(const nlohmann::json& doc) {
  LocalizationResult r;
  try {
    r.query_id = doc.at("query_id").get<std::string>();
    r.method = parse_method(doc.at("method").get<std::string>());
    r.ok = doc.at("ok").get<bool>();
    r.assignments = assignments_from_json(doc.at("assignments"));
    r.attempts = doc.value("attempts", 0);
    if (r.ok) {
      const auto& w = doc.at("predicted_world");
      const auto& p = doc.at("predicted_pixel");
      r.predicted_world = {w.at(0).get<double>(), w.at(1).get<double>()};
      r.predicted_pixel = {p.at(0).get<int>(), p.at(1).get<int>()};
    } else {
      r.failure = doc.value("failure", "");
    }
    r.raw_output = doc.value("raw_output", "");
    if (doc.contains("error_m") && doc["error_m"].is_number()) r.error_m = doc["error_m"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("prediction record: ") + e.what());
  }
  return r;
}

}  // namespace t2p
