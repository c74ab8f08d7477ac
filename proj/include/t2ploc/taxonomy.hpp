#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace t2p {

/// Countable instances vs. uncountable regions.
enum class Kind { Object, Stuff };

std::string_view kind_name(Kind k) noexcept;
Kind parse_kind(std::string_view s);

struct LabelInfo {
  std::uint16_t id = 0;
  std::string name;
  Kind kind = Kind::Object;
};

/// Label id -> (display name, kind). Loaded from JSON:
///   {"labels": [{"id": 7, "name": "road", "kind": "stuff"}, ...]}
class Taxonomy {
 public:
  Taxonomy() = default;

  static Taxonomy from_json(std::string_view text);
  static Taxonomy load(const std::filesystem::path& path);

  /// Throws Taxonomy on a duplicate id.
  void add(LabelInfo info);

  const LabelInfo* find(std::uint16_t id) const;
  /// Throws Taxonomy for unknown ids.
  const LabelInfo& at(std::uint16_t id) const;
  const LabelInfo* find_by_name(std::string_view name) const;

  const std::map<std::uint16_t, LabelInfo>& labels() const { return labels_; }

 private:
  std::map<std::uint16_t, LabelInfo> labels_;
};

}  // namespace t2p
