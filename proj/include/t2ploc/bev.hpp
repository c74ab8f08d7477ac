#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "t2ploc/color.hpp"
#include "t2ploc/geometry.hpp"
#include "t2ploc/object.hpp"

namespace t2p {

inline constexpr ColorRgb kBevBackground{0, 0, 0};

/// Row-major H x W raster of the map window.
class BevImage {
 public:
  BevImage(GeoReference georef, ColorRgb background = kBevBackground);

  const GeoReference& georef() const { return georef_; }
  ColorRgb background() const { return background_; }
  int width() const { return georef_.width_px(); }
  int height() const { return georef_.height_px(); }

  ColorRgb at(PixelCoord px) const { return pixels_[index(px)]; }
  void set(PixelCoord px, ColorRgb c) { pixels_[index(px)] = c; }
  const std::vector<ColorRgb>& pixels() const { return pixels_; }

  friend bool operator==(const BevImage&, const BevImage&) = default;

 private:
  std::size_t index(PixelCoord px) const {
    return static_cast<std::size_t>(px.v) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(px.u);
  }

  GeoReference georef_;
  ColorRgb background_;
  std::vector<ColorRgb> pixels_;
};

/// Each object point paints its own pixel with the object's mean color.
/// Object kind beats Stuff; within a kind the higher point wins; exact ties
/// go to the lower object id. The result does not depend on object order.
/// Points outside the window are skipped.
BevImage render_bev(const LocalMap& map, const GeoReference& georef);

/// 8-bit RGB PNG, no ancillary chunks.
std::string encode_png(const BevImage& image);
BevImage decode_png(std::string_view bytes, const GeoReference& georef);
void write_png(const std::filesystem::path& path, const BevImage& image);
BevImage read_png(const std::filesystem::path& path, const GeoReference& georef);

}  // namespace t2p
