#include "t2ploc/color.hpp"

#include "t2ploc/error.hpp"

namespace t2p {

namespace {

std::uint8_t rounded_mean(std::uint64_t sum, std::uint64_t n) {
  // floor(sum / n + 1/2) in exact integer arithmetic.
  return static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
}

}  // namespace

ColorRgb mean_color(std::span<const ColoredPoint> points) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyObject, "mean color of an empty point set");
  }
  std::uint64_t r = 0, g = 0, b = 0;
  for (const auto& pt : points) {
    r += pt.c.r;
    g += pt.c.g;
    b += pt.c.b;
  }
  const std::uint64_t n = points.size();
  return {rounded_mean(r, n), rounded_mean(g, n), rounded_mean(b, n)};
}

}  // namespace t2p
