#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "t2ploc/cloud_index.hpp"
#include "t2ploc/dbscan.hpp"
#include "t2ploc/object.hpp"
#include "t2ploc/point_cloud.hpp"
#include "t2ploc/trajectory.hpp"

namespace t2p {

struct MapBuildConfig {
  double side_m = 50.0;
  ClusterParams cluster;
  std::map<std::uint16_t, ClusterParams> cluster_overrides;  // per stuff label

  const ClusterParams& cluster_for(std::uint16_t semantic) const {
    const auto it = cluster_overrides.find(semantic);
    return it == cluster_overrides.end() ? cluster : it->second;
  }
};

/// Greedy scan in trajectory order: a pose is kept iff it is at least
/// `min_spacing` from every center kept so far.
std::vector<Vec2> sample_map_centers(const Trajectory& traj, double min_spacing);

/// Regular grid of centers over the cloud's xy bounding box (cell centers
/// at pitch/2 + k * pitch from the minimum corner). A center is kept iff
/// the map built there holds strictly more than `min_objects` objects.
std::vector<Vec2> grid_sample_centers(const CloudIndex& index, double pitch,
                                      std::size_t min_objects, const MapBuildConfig& config);

/// Brute-force closed-window crop; CloudIndex::crop is the indexed form.
std::vector<std::uint32_t> crop_window(const InstancePointCloud& cloud, Vec2 center, double side_m);

/// Object-kind instance keeps at least one third of its points.
inline bool retain_object(std::size_t inside_count, std::size_t total_count) {
  return total_count > 0 && 3 * inside_count >= total_count;
}

struct ObjectCandidate {
  ObjectInstance inside;  // only the in-window points
  std::size_t total_count = 0;
};

/// One-third rule for Object kind; Stuff candidates pass through.
std::vector<ObjectInstance> filter_objects(std::vector<ObjectCandidate> candidates);

/// Crop, split by kind, cluster stuff per label, filter objects, and order
/// by (kind, semantic, source id) with sequential ids. An empty result is
/// reported through LocalMap::empty().
LocalMap build_local_map(const CloudIndex& index, Vec2 center, const MapBuildConfig& config);

}  // namespace t2p
