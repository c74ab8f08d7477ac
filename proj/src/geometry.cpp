#include "t2ploc/geometry.hpp"

#include <algorithm>
#include <string>

#include "t2ploc/error.hpp"

namespace t2p {

GeoReference::GeoReference(Vec2 center, double side_m, int width_px, int height_px)
    : center_(center), side_m_(side_m), width_px_(width_px), height_px_(height_px) {
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    throw Error(ErrorCode::InvalidArgument, "georeference center must be finite", "center");
  }
  if (!(side_m > 0.0) || !std::isfinite(side_m)) {
    throw Error(ErrorCode::InvalidArgument, "georeference side must be positive", "side_m");
  }
  if (width_px != height_px || width_px < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "georeference raster must be square with at least 2 pixels per side",
                "width_px");
  }
}

namespace {

// Nearest integer with exact halves rounded down, so a point on the seam
// between two pixels lands in the lower-index one.
int round_half_down(double t) { return static_cast<int>(std::ceil(t - 0.5)); }

}  // namespace

PixelProjection world_to_pixel(Vec2 p, const GeoReference& g) {
  const double half = g.side_m() / 2.0;
  const Vec2 c = g.center();
  const double fu = (p.x - (c.x - half)) * g.width_px() / g.side_m() - 0.5;
  const double fv = ((c.y + half) - p.y) * g.height_px() / g.side_m() - 0.5;

  PixelProjection out;
  out.in_window = !(std::abs(p.x - c.x) > half || std::abs(p.y - c.y) > half);
  // Clamp in floating point first so huge offsets cannot overflow int.
  const double umax = g.width_px() - 1;
  const double vmax = g.height_px() - 1;
  out.pixel.u = round_half_down(std::clamp(fu, 0.0, umax));
  out.pixel.v = round_half_down(std::clamp(fv, 0.0, vmax));
  return out;
}

Vec2 pixel_to_world(PixelCoord px, const GeoReference& g) {
  if (!g.contains(px)) {
    throw Error(ErrorCode::Range, "pixel (" + std::to_string(px.u) + ", " +
                                      std::to_string(px.v) + ") is outside the raster");
  }
  const double half = g.side_m() / 2.0;
  const Vec2 c = g.center();
  return {c.x - half + (px.u + 0.5) * g.side_m() / g.width_px(),
          c.y + half - (px.v + 0.5) * g.side_m() / g.height_px()};
}

}  // namespace t2p
