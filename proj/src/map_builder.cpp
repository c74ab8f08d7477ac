#include "t2ploc/map_builder.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "t2ploc/error.hpp"

namespace t2p {

std::vector<Vec2> sample_map_centers(const Trajectory& traj, double min_spacing) {
  if (traj.poses.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no poses");
  if (!(min_spacing > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min spacing must be positive", "map.min_spacing");
  }
  const double spacing2 = min_spacing * min_spacing;
  std::vector<Vec2> kept;
  for (const Vec2& pose : traj.poses) {
    const bool far = std::all_of(kept.begin(), kept.end(), [&](const Vec2& c) {
      return squared_distance(pose, c) >= spacing2;
    });
    if (far) kept.push_back(pose);
  }
  return kept;
}

std::vector<Vec2> grid_sample_centers(const CloudIndex& index, double pitch,
                                      std::size_t min_objects, const MapBuildConfig& config) {
  if (!(pitch > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid pitch must be positive", "map.grid_pitch_m");
  const Bounds2 b = index.bounds();
  std::vector<Vec2> out;
  if (b.empty) return out;
  const auto nx = static_cast<std::int64_t>(std::max(1.0, std::ceil((b.max.x - b.min.x) / pitch)));
  const auto ny = static_cast<std::int64_t>(std::max(1.0, std::ceil((b.max.y - b.min.y) / pitch)));
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      const Vec2 c{b.min.x + pitch * (i + 0.5), b.min.y + pitch * (j + 0.5)};
      if (build_local_map(index, c, config).objects.size() > min_objects) out.push_back(c);
    }
  }
  return out;
}

std::vector<std::uint32_t> crop_window(const InstancePointCloud& cloud, Vec2 center, double side_m) {
  if (!(side_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "window side must be positive", "map.side_m");
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < cloud.points.size(); ++i) {
    if (in_window(cloud.points[i].p.xy(), center, side_m)) out.push_back(i);
  }
  return out;
}

std::vector<ObjectInstance> filter_objects(std::vector<ObjectCandidate> candidates) {
  std::vector<ObjectInstance> kept;
  for (auto& cand : candidates) {
    if (cand.inside.kind == Kind::Stuff ||
        retain_object(cand.inside.points.size(), cand.total_count)) {
      kept.push_back(std::move(cand.inside));
    }
  }
  return kept;
}

LocalMap build_local_map(const CloudIndex& index, Vec2 center, const MapBuildConfig& config) {
  if (!(config.side_m > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "window side must be positive", "map.side_m");
  }
  const auto& cloud = index.cloud();
  const auto& taxonomy = index.taxonomy();

  // std::map keeps groups ordered by (semantic, instance).
  std::map<std::pair<std::uint16_t, std::uint32_t>, std::vector<ColoredPoint>> object_groups;
  std::map<std::uint16_t, std::vector<ColoredPoint>> stuff_groups;
  for (std::uint32_t i : index.crop(center, config.side_m)) {
    const auto& pt = cloud.points[i];
    const ColoredPoint cp{pt.p, pt.c};
    if (taxonomy.at(pt.semantic).kind == Kind::Stuff) {
      stuff_groups[pt.semantic].push_back(cp);
    } else if (pt.instance != 0) {
      object_groups[{pt.semantic, pt.instance}].push_back(cp);
    }
  }

  std::vector<ObjectCandidate> candidates;
  for (auto& [key, pts] : object_groups) {
    const std::size_t total = index.instance_total(key.first, key.second);
    candidates.push_back({ObjectInstance::make(key.first, Kind::Object, key.second, std::move(pts)), total});
  }
  for (auto& [semantic, pts] : stuff_groups) {
    for (auto& inst : cluster_stuff(pts, semantic, config.cluster_for(semantic))) {
      candidates.push_back({std::move(inst), 0});
    }
  }

  LocalMap map;
  map.center = center;
  map.side_m = config.side_m;
  map.objects = filter_objects(std::move(candidates));
  std::stable_sort(map.objects.begin(), map.objects.end(),
                   [](const ObjectInstance& a, const ObjectInstance& b) {
                     return std::tuple(a.kind != Kind::Object, a.semantic, a.source_id) <
                            std::tuple(b.kind != Kind::Object, b.semantic, b.source_id);
                   });
  for (std::size_t i = 0; i < map.objects.size(); ++i) map.objects[i].id = static_cast<int>(i);
  return map;
}

}  // namespace t2p
