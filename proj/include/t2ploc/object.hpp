#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "t2ploc/color.hpp"
#include "t2ploc/direction.hpp"
#include "t2ploc/geometry.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

/// Mean of the ground-projected (x, y) coordinates. Throws EmptyObject.
Vec2 ground_centroid(std::span<const ColoredPoint> points);

/// A discrete object in a map or pose cell. `source_id` is the raw
/// instance id for Object kind and the per-window cluster index for Stuff.
struct ObjectInstance {
  int id = 0;
  std::uint16_t semantic = 0;
  Kind kind = Kind::Object;
  std::uint32_t source_id = 0;
  std::vector<ColoredPoint> points;
  ColorRgb mean_color;
  Vec2 centroid;

  /// Builds the instance and fills the cached color and centroid.
  static ObjectInstance make(std::uint16_t semantic, Kind kind, std::uint32_t source_id,
                             std::vector<ColoredPoint> points);

  bool caches_consistent() const;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

inline Direction direction_of(Vec2 pose, const ObjectInstance& object,
                              double delta = kDefaultOnTopDistance) {
  return direction_of(pose, object.points, object.centroid, delta);
}

/// S x S window of discrete objects. Object ids are 0..n-1 in storage order.
struct LocalMap {
  int map_id = 0;
  Vec2 center;
  double side_m = 50.0;
  std::vector<ObjectInstance> objects;

  bool empty() const { return objects.empty(); }

  friend bool operator==(const LocalMap&, const LocalMap&) = default;
};

}  // namespace t2p
