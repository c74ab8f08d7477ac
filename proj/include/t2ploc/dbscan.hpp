#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "t2ploc/color.hpp"
#include "t2ploc/geometry.hpp"
#include "t2ploc/object.hpp"

namespace t2p {

struct ClusterParams {
  double eps = 1.5;          // meters
  std::size_t min_pts = 20;  // neighborhood size, the point itself included

  void validate() const;

  friend bool operator==(const ClusterParams&, const ClusterParams&) = default;
};

inline constexpr int kNoise = -1;

/// DBSCAN on 2D points. Neighborhoods are closed (distance <= eps).
///
/// Core points with at least `min_pts` neighbors are joined into clusters
/// by eps-connectivity. A border point that reaches several clusters goes
/// to the one whose lowest-index core point is smallest, which is what a
/// sequential index-order DBSCAN produces. Cluster labels are then numbered
/// by ascending minimum point index. Noise is labeled kNoise.
std::vector<int> dbscan_labels(std::span<const Vec2> points, const ClusterParams& params);

/// Clusters the ground projection of one stuff label's points into
/// instances; noise is dropped. Instance `source_id` is the cluster label.
std::vector<ObjectInstance> cluster_stuff(std::span<const ColoredPoint> points,
                                          std::uint16_t semantic, const ClusterParams& params);

}  // namespace t2p
