#include "t2ploc/bev.hpp"

#include <limits>

#include "t2ploc/error.hpp"

namespace t2p {

BevImage::BevImage(GeoReference georef, ColorRgb background)
    : georef_(georef),
      background_(background),
      pixels_(static_cast<std::size_t>(georef.width_px()) * static_cast<std::size_t>(georef.height_px()),
              background) {}

namespace {

struct Claim {
  int priority = -1;  // 1 Object, 0 Stuff, -1 empty
  double z = -std::numeric_limits<double>::infinity();
  int id = -1;
  std::size_t slot = 0;  // index into map.objects

  bool beats(const Claim& other) const {
    if (priority != other.priority) return priority > other.priority;
    if (z != other.z) return z > other.z;
    return id < other.id;
  }
};

}  // namespace

BevImage render_bev(const LocalMap& map, const GeoReference& georef) {
  if (georef.center() != map.center || georef.side_m() != map.side_m) {
    throw Error(ErrorCode::InvalidArgument, "georeference does not cover the map window");
  }
  BevImage image(georef);
  std::vector<Claim> claims(image.pixels().size());

  for (std::size_t k = 0; k < map.objects.size(); ++k) {
    const auto& obj = map.objects[k];
    const Claim base{obj.kind == Kind::Object ? 1 : 0, 0.0, obj.id, k};
    for (const auto& pt : obj.points) {
      const auto proj = world_to_pixel(pt.p.xy(), georef);
      if (!proj.in_window) continue;
      Claim c = base;
      c.z = pt.p.z;
      auto& cur = claims[static_cast<std::size_t>(proj.pixel.v) * georef.width_px() + proj.pixel.u];
      if (c.beats(cur)) cur = c;
    }
  }

  for (int v = 0; v < georef.height_px(); ++v) {
    for (int u = 0; u < georef.width_px(); ++u) {
      const auto& c = claims[static_cast<std::size_t>(v) * georef.width_px() + u];
      if (c.priority >= 0) image.set({u, v}, map.objects[c.slot].mean_color);
    }
  }
  return image;
}

}  // namespace t2p
