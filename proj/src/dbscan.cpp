#include "t2ploc/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "t2ploc/error.hpp"

namespace t2p {

void ClusterParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidArgument, "cluster eps must be positive", "cluster.eps");
  }
  if (min_pts < 1) {
    throw Error(ErrorCode::InvalidArgument, "cluster min_pts must be at least 1", "cluster.min_pts");
  }
}

namespace {

// Uniform grid with eps-sized cells; every eps-neighbor of a point lies in
// the 3x3 block around its cell.
class NeighborGrid {
 public:
  NeighborGrid(std::span<const Vec2> pts, double eps) : pts_(pts), eps_(eps), eps2_(eps * eps) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[cell_of(pts[i])].push_back(i);
  }

  template <typename Fn>
  void for_each_neighbor(std::size_t i, Fn&& fn) const {
    const Cell c = cell_of(pts_[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find({c.x + dx, c.y + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second) {
          if (squared_distance(pts_[i], pts_[j]) <= eps2_) fn(j);
        }
      }
    }
  }

 private:
  struct Cell {
    std::int64_t x, y;
    friend bool operator==(const Cell&, const Cell&) = default;
  };
  struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
      return std::hash<std::int64_t>{}(c.x) * 0x9E3779B97F4A7C15ULL + std::hash<std::int64_t>{}(c.y);
    }
  };

  Cell cell_of(Vec2 p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / eps_)),
            static_cast<std::int64_t>(std::floor(p.y / eps_))};
  }

  std::span<const Vec2> pts_;
  double eps_;
  double eps2_;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> cells_;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<int> dbscan_labels(std::span<const Vec2> points, const ClusterParams& params) {
  params.validate();
  const std::size_t n = points.size();
  std::vector<int> labels(n, kNoise);
  if (n == 0) return labels;

  const NeighborGrid grid(points, params.eps);
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    grid.for_each_neighbor(i, [&](std::size_t) { ++count; });
    core[i] = count >= params.min_pts;
  }

  // Core connectivity. Union by smaller index keeps each root at the
  // component's lowest core index.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    grid.for_each_neighbor(i, [&](std::size_t j) {
      if (!core[j]) return;
      const std::size_t a = find_root(parent, i), b = find_root(parent, j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    });
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // owner[i] = lowest core index of the cluster point i joins.
  std::vector<std::size_t> owner(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      owner[i] = find_root(parent, i);
      continue;
    }
    grid.for_each_neighbor(i, [&](std::size_t j) {
      if (core[j]) owner[i] = std::min(owner[i], find_root(parent, j));
    });
  }

  // Number clusters by first appearance in index order, i.e. by their
  // minimum point index.
  std::unordered_map<std::size_t, int> number;
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] == kNone) continue;
    const auto [it, inserted] = number.emplace(owner[i], static_cast<int>(number.size()));
    labels[i] = it->second;
  }
  return labels;
}

std::vector<ObjectInstance> cluster_stuff(std::span<const ColoredPoint> points,
                                          std::uint16_t semantic, const ClusterParams& params) {
  std::vector<Vec2> ground(points.size());
  std::transform(points.begin(), points.end(), ground.begin(),
                 [](const ColoredPoint& pt) { return pt.p.xy(); });
  const auto labels = dbscan_labels(ground, params);

  const int clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<ColoredPoint>> members(static_cast<std::size_t>(std::max(clusters, 0)));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] != kNoise) members[static_cast<std::size_t>(labels[i])].push_back(points[i]);
  }

  std::vector<ObjectInstance> out;
  out.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    out.push_back(ObjectInstance::make(semantic, Kind::Stuff, static_cast<std::uint32_t>(k),
                                       std::move(members[k])));
  }
  return out;
}

}  // namespace t2p
