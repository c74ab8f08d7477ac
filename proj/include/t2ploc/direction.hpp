#pragma once

#include <span>
#include <string_view>

#include "t2ploc/color.hpp"
#include "t2ploc/geometry.hpp"

namespace t2p {

enum class Direction { North, South, East, West, OnTop };

/// Default on-top radius, meters.
inline constexpr double kDefaultOnTopDistance = 2.5;

/// Lowercase word used in hint text ("on-top" keeps its hyphen).
std::string_view direction_word(Direction d) noexcept;

/// Inverse of direction_word. Throws Parse on unknown words.
Direction parse_direction(std::string_view word);

/// Cardinal classification of the offset (centroid - pose). Ties with
/// |dx| == |dy| resolve to East/West.
Direction classify_offset(double dx, double dy) noexcept;

/// On-top when the closest ground-projected point is nearer than `delta`,
/// otherwise the cardinal class of the centroid offset. Throws EmptyObject
/// for an empty point set and InvalidArgument for a non-positive delta.
Direction direction_of(Vec2 pose, std::span<const ColoredPoint> points, Vec2 centroid,
                       double delta = kDefaultOnTopDistance);

}  // namespace t2p
