#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <vector>

#include "t2ploc/color.hpp"
#include "t2ploc/geometry.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

struct InstancePoint {
  WorldPoint p;
  ColorRgb c;
  std::uint16_t semantic = 0;
  std::uint32_t instance = 0;  // 0 = unassigned

  friend bool operator==(const InstancePoint&, const InstancePoint&) = default;
};

struct InstancePointCloud {
  std::vector<InstancePoint> points;
};

// Binary layout, little-endian:
//   "T2PC" | u64 count | count x { f32 x, y, z | u8 r, g, b | u16 semantic | u32 instance }
inline constexpr char kCloudMagic[4] = {'T', '2', 'P', 'C'};
inline constexpr std::size_t kCloudHeaderBytes = 12;
inline constexpr std::size_t kCloudRecordBytes = 21;

/// Reads either the binary layout above or a text file with eight
/// whitespace-separated columns per row: x y z r g b semantic instance.
/// Malformed rows raise Parse naming the row; unknown labels raise Taxonomy.
InstancePointCloud load_point_cloud(const std::filesystem::path& path, const Taxonomy& taxonomy);

InstancePointCloud parse_point_cloud_text(std::istream& in, const Taxonomy& taxonomy);

void write_point_cloud(const std::filesystem::path& path, const InstancePointCloud& cloud);

}  // namespace t2p
