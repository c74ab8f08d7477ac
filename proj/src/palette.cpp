#include "t2ploc/palette.hpp"

#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "t2ploc/error.hpp"

namespace t2p {

ColorPalette::ColorPalette(std::vector<PaletteEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::Config, "palette is empty", "palette");
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    // Hint text places the color as a single token before the semantic name.
    if (e.name.empty() || e.name.find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorCode::Config, "palette name '" + e.name + "' must be one token",
                  "palette");
    }
    if (!seen.insert(e.name).second) {
      throw Error(ErrorCode::Config, "duplicate palette name '" + e.name + "'", "palette");
    }
  }
}

ColorPalette ColorPalette::from_json(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("palette JSON: ") + e.what(), "palette");
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "palette must be a JSON object", "palette");

  std::vector<PaletteEntry> entries;
  for (const auto& [name, rgb] : doc.items()) {
    if (!rgb.is_array() || rgb.size() != 3) {
      throw Error(ErrorCode::Parse, "palette entry '" + name + "' must be [r, g, b]", "palette");
    }
    int ch[3];
    for (int i = 0; i < 3; ++i) {
      if (!rgb[i].is_number_integer() || rgb[i].get<int>() < 0 || rgb[i].get<int>() > 255) {
        throw Error(ErrorCode::Parse, "palette entry '" + name + "' has a channel outside [0,255]",
                    "palette");
      }
      ch[i] = rgb[i].get<int>();
    }
    entries.push_back({name, ColorRgb{static_cast<std::uint8_t>(ch[0]),
                                      static_cast<std::uint8_t>(ch[1]),
                                      static_cast<std::uint8_t>(ch[2])}});
  }
  return ColorPalette(std::move(entries));
}

ColorPalette ColorPalette::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open palette file " + path.string(), "palette");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::size_t ColorPalette::nearest_index(ColorRgb c) const {
  std::size_t best = 0;
  long best_d2 = std::numeric_limits<long>::max();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ColorRgb k = entries_[i].center;
    const long dr = long(c.r) - k.r, dg = long(c.g) - k.g, db = long(c.b) - k.b;
    const long d2 = dr * dr + dg * dg + db * db;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace t2p
