#pragma once

#include <cmath>

namespace t2p {

/// Ground-plane position in a local East-North frame, meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// x East, y North, z up; meters.
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 xy() const { return {x, y}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double squared_distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// u grows East (right), v grows South (down).
struct PixelCoord {
  int u = 0;
  int v = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Square S x S window rasterized to W x W pixels.
class GeoReference {
 public:
  GeoReference(Vec2 center, double side_m, int width_px, int height_px);

  static GeoReference square(Vec2 center, double side_m, int size_px) {
    return GeoReference(center, side_m, size_px, size_px);
  }

  Vec2 center() const { return center_; }
  double side_m() const { return side_m_; }
  int width_px() const { return width_px_; }
  int height_px() const { return height_px_; }
  double resolution() const { return side_m_ / width_px_; }

  bool contains(PixelCoord px) const {
    return px.u >= 0 && px.u < width_px_ && px.v >= 0 && px.v < height_px_;
  }

  friend bool operator==(const GeoReference&, const GeoReference&) = default;

 private:
  Vec2 center_;
  double side_m_;
  int width_px_;
  int height_px_;
};

struct PixelProjection {
  PixelCoord pixel;
  bool in_window = true;
};

/// Half-pixel-center convention; the result is clamped to the raster and
/// `in_window` is cleared when the point lies outside the S x S window.
PixelProjection world_to_pixel(Vec2 p, const GeoReference& g);

/// World coordinates of the pixel center. Throws Range for pixels outside
/// the raster.
Vec2 pixel_to_world(PixelCoord px, const GeoReference& g);

/// Closed S x S window test.
inline bool in_window(Vec2 p, Vec2 center, double side_m) {
  const double half = side_m / 2.0;
  return std::abs(p.x - center.x) <= half && std::abs(p.y - center.y) <= half;
}

}  // namespace t2p
