#include "t2ploc/direction.hpp"

#include <cmath>
#include <string>

#include "t2ploc/error.hpp"

namespace t2p {

std::string_view direction_word(Direction d) noexcept {
  switch (d) {
    case Direction::North: return "north";
    case Direction::South: return "south";
    case Direction::East: return "east";
    case Direction::West: return "west";
    case Direction::OnTop: return "on-top";
  }
  return "";
}

Direction parse_direction(std::string_view word) {
  for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West,
                      Direction::OnTop}) {
    if (word == direction_word(d)) return d;
  }
  throw Error(ErrorCode::Parse, "unknown direction word '" + std::string(word) + "'");
}

Direction classify_offset(double dx, double dy) noexcept {
  if (std::abs(dx) >= std::abs(dy)) return dx >= 0.0 ? Direction::East : Direction::West;
  return dy >= 0.0 ? Direction::North : Direction::South;
}

Direction direction_of(Vec2 pose, std::span<const ColoredPoint> points, Vec2 centroid,
                       double delta) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyObject, "direction of an empty object");
  }
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "on-top distance must be positive", "delta");
  }
  for (const auto& pt : points) {
    if (std::sqrt(squared_distance(pt.p.xy(), pose)) < delta) return Direction::OnTop;
  }
  return classify_offset(centroid.x - pose.x, centroid.y - pose.y);
}

}  // namespace t2p
