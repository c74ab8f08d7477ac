#pragma once

#include <cstdint>
#include <span>

#include "t2ploc/geometry.hpp"

namespace t2p {

struct ColorRgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const ColorRgb&, const ColorRgb&) = default;
};

struct ColoredPoint {
  WorldPoint p;
  ColorRgb c;

  friend bool operator==(const ColoredPoint&, const ColoredPoint&) = default;
};

/// Per-channel arithmetic mean, rounded half-up. Throws EmptyObject on an
/// empty input.
ColorRgb mean_color(std::span<const ColoredPoint> points);

}  // namespace t2p
