#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/geometry.hpp"
#include "t2ploc/pna.hpp"

namespace t2p {

enum class Method { Oracle, Vlm };

std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view s);

/// One record per query, successful or not. Failed records have no
/// position and count as infinite error in evaluation.
struct LocalizationResult {
  std::string query_id;
  Method method = Method::Oracle;
  bool ok = false;
  Vec2 predicted_world;
  PixelCoord predicted_pixel;
  std::vector<Assignment> assignments;
  std::string raw_output;  // last model reply (VLM only)
  std::string failure;     // "<code>: <message>" when !ok
  int attempts = 0;
  std::optional<double> error_m;  // filled by evaluation

  friend bool operator==(const LocalizationResult&, const LocalizationResult&) = default;
};

nlohmann::json result_to_json(const LocalizationResult& r);
LocalizationResult result_from_json(const nlohmann::json& doc);

}  // namespace t2p
