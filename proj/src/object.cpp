#include "t2ploc/object.hpp"

#include "t2ploc/error.hpp"

namespace t2p {

Vec2 ground_centroid(std::span<const ColoredPoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyObject, "centroid of an empty point set");
  double sx = 0.0, sy = 0.0;
  for (const auto& pt : points) {
    sx += pt.p.x;
    sy += pt.p.y;
  }
  const double n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

ObjectInstance ObjectInstance::make(std::uint16_t semantic, Kind kind, std::uint32_t source_id,
                                    std::vector<ColoredPoint> points) {
  ObjectInstance obj;
  obj.semantic = semantic;
  obj.kind = kind;
  obj.source_id = source_id;
  obj.points = std::move(points);
  obj.mean_color = t2p::mean_color(obj.points);
  obj.centroid = ground_centroid(obj.points);
  return obj;
}

bool ObjectInstance::caches_consistent() const {
  return !points.empty() && mean_color == t2p::mean_color(points) &&
         centroid == ground_centroid(points);
}

}  // namespace t2p
