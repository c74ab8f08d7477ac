#pragma once

// Synthetic scenes and brute-force reference implementations for tests.
// Nothing here calls the code under test except plain data types.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "t2ploc/color.hpp"
#include "t2ploc/direction.hpp"
#include "t2ploc/geometry.hpp"
#include "t2ploc/object.hpp"
#include "t2ploc/palette.hpp"
#include "t2ploc/point_cloud.hpp"
#include "t2ploc/random.hpp"
#include "t2ploc/taxonomy.hpp"

#ifndef T2P_TEST_DATA_DIR
#define T2P_TEST_DATA_DIR "data"
#endif

namespace synth {

using namespace t2p;

inline std::filesystem::path data_dir() { return T2P_TEST_DATA_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("t2p_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ColorPalette shipped_palette() { return ColorPalette::load(data_dir() / "palette.json"); }

// Label ids used across the synthetic scenes.
enum : std::uint16_t {
  kRoad = 1,
  kVegetation = 2,
  kSidewalk = 3,
  kBuilding = 10,
  kCar = 11,
  kPole = 12,
  kSign = 13,
  kFence = 14,
  kBin = 15,
};

inline Taxonomy taxonomy() {
  Taxonomy t;
  t.add({kRoad, "road", Kind::Stuff});
  t.add({kVegetation, "vegetation", Kind::Stuff});
  t.add({kSidewalk, "sidewalk", Kind::Stuff});
  t.add({kBuilding, "building", Kind::Object});
  t.add({kCar, "car", Kind::Object});
  t.add({kPole, "pole", Kind::Object});
  t.add({kSign, "traffic-sign", Kind::Object});
  t.add({kFence, "fence", Kind::Object});
  t.add({kBin, "trash-bin", Kind::Object});
  return t;
}

inline const std::vector<std::uint16_t>& object_labels() {
  static const std::vector<std::uint16_t> v{kBuilding, kCar, kPole, kSign, kFence, kBin};
  return v;
}

inline const std::vector<std::uint16_t>& stuff_labels() {
  static const std::vector<std::uint16_t> v{kRoad, kVegetation, kSidewalk};
  return v;
}

inline ColoredPoint cp(double x, double y, double z = 0.0, ColorRgb c = {100, 100, 100}) {
  return {{x, y, z}, c};
}

inline InstancePoint ip(double x, double y, double z, ColorRgb c, std::uint16_t sem, std::uint32_t inst) {
  return {{x, y, z}, c, sem, inst};
}

/// A blob of `n` points uniformly inside a square of half-width `r`.
inline std::vector<InstancePoint> blob(Rng& rng, Vec2 c, double r, std::size_t n, ColorRgb color,
                                       std::uint16_t sem, std::uint32_t inst) {
  std::vector<InstancePoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(ip(c.x + rng.uniform(-r, r), c.y + rng.uniform(-r, r), rng.uniform(0.0, 4.0), color, sem, inst));
  }
  return out;
}

/// Fisher-Yates over Rng::below.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

inline ColorRgb color_of(const ColorPalette& palette, std::size_t index) {
  return palette.entries()[index % palette.size()].center;
}

/// Blobs of objects and stuff scattered over a square area.
struct SceneSpec {
  Vec2 center{0.0, 0.0};
  double half_extent = 40.0;
  std::size_t objects = 16;
  std::size_t stuff_patches = 4;
  std::size_t object_points = 12;
  std::size_t stuff_points = 30;
};

inline InstancePointCloud random_cloud(Rng& rng, const SceneSpec& spec, const ColorPalette& palette) {
  InstancePointCloud cloud;
  const double h = spec.half_extent;
  auto at = [&] { return Vec2{spec.center.x + rng.uniform(-h, h), spec.center.y + rng.uniform(-h, h)}; };
  for (std::size_t k = 0; k < spec.objects; ++k) {
    const auto sem = object_labels()[rng.below(object_labels().size())];
    const auto color = color_of(palette, rng.below(palette.size()));
    auto pts = blob(rng, at(), rng.uniform(0.3, 2.0), spec.object_points, color, sem, 1 + static_cast<std::uint32_t>(k));
    cloud.points.insert(cloud.points.end(), pts.begin(), pts.end());
  }
  for (std::size_t k = 0; k < spec.stuff_patches; ++k) {
    const auto sem = stuff_labels()[rng.below(stuff_labels().size())];
    const auto color = color_of(palette, rng.below(palette.size()));
    auto pts = blob(rng, at(), rng.uniform(1.0, 3.0), spec.stuff_points, color, sem, 0);
    cloud.points.insert(cloud.points.end(), pts.begin(), pts.end());
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// Reference implementations.

/// Cardinal rule written out case by case.
inline Direction literal_direction(double dx, double dy) {
  if (std::abs(dx) >= std::abs(dy)) {
    if (dx >= 0) return Direction::East;
    return Direction::West;
  }
  if (dy >= 0) return Direction::North;
  return Direction::South;
}

inline Direction literal_direction_of(Vec2 pose, const std::vector<ColoredPoint>& pts, double delta) {
  for (const auto& p : pts) {
    if (std::sqrt((p.p.x - pose.x) * (p.p.x - pose.x) + (p.p.y - pose.y) * (p.p.y - pose.y)) < delta) {
      return Direction::OnTop;
    }
  }
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.p.x;
    sy += p.p.y;
  }
  return literal_direction(sx / pts.size() - pose.x, sy / pts.size() - pose.y);
}

/// Textbook sequential DBSCAN with O(n^2) region queries; clusters are
/// numbered in creation order, noise is -1.
inline std::vector<int> reference_dbscan(const std::vector<Vec2>& pts, double eps, std::size_t min_pts) {
  const std::size_t n = pts.size();
  auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      if (dx * dx + dy * dy <= eps * eps) out.push_back(j);
    }
    return out;
  };
  constexpr int kUnvisited = -2;
  std::vector<int> label(n, kUnvisited);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    auto nb = region(i);
    if (nb.size() < min_pts) {
      label[i] = -1;
      continue;
    }
    label[i] = cluster;
    std::deque<std::size_t> seeds(nb.begin(), nb.end());
    while (!seeds.empty()) {
      const auto j = seeds.front();
      seeds.pop_front();
      if (label[j] == -1) label[j] = cluster;
      if (label[j] != kUnvisited) continue;
      label[j] = cluster;
      auto nj = region(j);
      if (nj.size() >= min_pts) seeds.insert(seeds.end(), nj.begin(), nj.end());
    }
    ++cluster;
  }
  return label;
}

/// Relabels clusters by ascending minimum member index.
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size(), -1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    auto it = remap.find(labels[i]);
    if (it == remap.end()) it = remap.emplace(labels[i], static_cast<int>(remap.size())).first;
    out[i] = it->second;
  }
  return out;
}

inline std::optional<Vec2> centroid_of(const std::vector<Vec2>& pts) {
  if (pts.empty()) return std::nullopt;
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  return Vec2{sx / pts.size(), sy / pts.size()};
}

/// Type-7 quantile via explicit rank arithmetic on a copy.
inline double reference_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  // Between equal neighbors (including two infinities) nothing interpolates.
  if (frac == 0.0 || v[lo] == v[hi]) return v[lo];
  return v[lo] + frac * (v[hi] - v[lo]);
}

/// Ground truth for one pose-cell object, recomputed from raw cloud points.
/// Object kind: A and B are centroids of the instance's raw points inside
/// the map and cell windows. Stuff kind: B is the cell cluster's centroid,
/// A the nearest same-label map cluster. Returns the node id when grounded.
struct ReferenceLabel {
  std::optional<int> partial;
  std::optional<int> full;
  std::optional<int> nearest;  // nearest same-label node to B
};

inline ReferenceLabel reference_label(const InstancePointCloud& cloud, const LocalMap& map, Vec2 xi, double side,
                                      const ObjectInstance& source, double tau_object, double tau_stuff) {
  auto window_centroid = [&](Vec2 c, std::uint16_t sem, std::uint32_t inst) {
    std::vector<Vec2> pts;
    for (const auto& p : cloud.points) {
      if (p.semantic == sem && p.instance == inst && std::abs(p.p.x - c.x) <= side / 2 &&
          std::abs(p.p.y - c.y) <= side / 2) {
        pts.push_back({p.p.x, p.p.y});
      }
    }
    return centroid_of(pts);
  };
  auto points_centroid = [](const ObjectInstance& o) {
    std::vector<Vec2> pts;
    for (const auto& p : o.points) pts.push_back({p.p.x, p.p.y});
    return *centroid_of(pts);
  };

  ReferenceLabel out;
  const Vec2 b = source.kind == Kind::Object ? *window_centroid(xi, source.semantic, source.source_id)
                                             : points_centroid(source);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : map.objects) {
    if (o.semantic != source.semantic) continue;
    const Vec2 a = points_centroid(o);
    const double d = std::hypot(a.x - b.x, a.y - b.y);
    if (d < best) {
      best = d;
      out.nearest = o.id;
    }
  }
  out.full = out.nearest;

  if (source.kind == Kind::Object) {
    for (const auto& o : map.objects) {
      if (o.kind != Kind::Object || o.semantic != source.semantic || o.source_id != source.source_id) continue;
      const auto a = window_centroid(map.center, o.semantic, o.source_id);
      if (a && std::hypot(a->x - b.x, a->y - b.y) < tau_object) out.partial = o.id;
    }
  } else if (out.nearest && best < tau_stuff) {
    out.partial = out.nearest;
  }
  return out;
}

}  // namespace synth
