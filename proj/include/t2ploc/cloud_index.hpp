#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "t2ploc/point_cloud.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

struct Bounds2 {
  Vec2 min;
  Vec2 max;
  bool empty = true;
};

/// Read-only bucket index over a cloud for fast window crops, plus the
/// whole-cloud point count of every annotated instance. Safe to share
/// between threads once built. Holds references to `cloud` and `taxonomy`.
class CloudIndex {
 public:
  CloudIndex(const InstancePointCloud& cloud, const Taxonomy& taxonomy, double cell_m = 10.0);
  CloudIndex(InstancePointCloud&&, const Taxonomy&, double = 10.0) = delete;
  CloudIndex(const InstancePointCloud&, Taxonomy&&, double = 10.0) = delete;

  const InstancePointCloud& cloud() const { return *cloud_; }
  const Taxonomy& taxonomy() const { return *taxonomy_; }
  Bounds2 bounds() const { return bounds_; }

  /// Indices of the points inside the closed S x S window, ascending.
  std::vector<std::uint32_t> crop(Vec2 center, double side_m) const;

  /// Points of (semantic, instance) in the whole cloud.
  std::size_t instance_total(std::uint16_t semantic, std::uint32_t instance) const;

 private:
  static std::uint64_t instance_key(std::uint16_t semantic, std::uint32_t instance) {
    return (std::uint64_t{semantic} << 32) | instance;
  }

  const InstancePointCloud* cloud_;
  const Taxonomy* taxonomy_;
  double cell_m_;
  Bounds2 bounds_;
  std::int64_t nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::unordered_map<std::uint64_t, std::size_t> totals_;
};

}  // namespace t2p
