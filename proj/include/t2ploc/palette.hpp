#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "t2ploc/color.hpp"

namespace t2p {

struct PaletteEntry {
  std::string name;
  ColorRgb center;
};

/// Ordered list of named RGB centers. Order matters: nearest-center ties go
/// to the lowest index.
class ColorPalette {
 public:
  explicit ColorPalette(std::vector<PaletteEntry> entries);

  /// JSON object mapping name -> [r, g, b]; file order is kept.
  static ColorPalette from_json(std::string_view text);
  static ColorPalette load(const std::filesystem::path& path);

  const std::vector<PaletteEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t nearest_index(ColorRgb c) const;
  const std::string& nearest(ColorRgb c) const { return entries_[nearest_index(c)].name; }

 private:
  std::vector<PaletteEntry> entries_;
};

}  // namespace t2p
