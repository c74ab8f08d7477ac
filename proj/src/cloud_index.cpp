#include "t2ploc/cloud_index.hpp"

#include <algorithm>
#include <cmath>

#include "t2ploc/error.hpp"

namespace t2p {

CloudIndex::CloudIndex(const InstancePointCloud& cloud, const Taxonomy& taxonomy, double cell_m)
    : cloud_(&cloud), taxonomy_(&taxonomy), cell_m_(cell_m) {
  if (!(cell_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "index cell size must be positive");
  if (cloud.points.size() > UINT32_MAX) {
    throw Error(ErrorCode::InvalidArgument, "cloud exceeds 2^32 points");
  }
  for (const auto& pt : cloud.points) {
    if (bounds_.empty) {
      bounds_ = {pt.p.xy(), pt.p.xy(), false};
    } else {
      bounds_.min = {std::min(bounds_.min.x, pt.p.x), std::min(bounds_.min.y, pt.p.y)};
      bounds_.max = {std::max(bounds_.max.x, pt.p.x), std::max(bounds_.max.y, pt.p.y)};
    }
    if (pt.instance != 0) ++totals_[instance_key(pt.semantic, pt.instance)];
  }
  if (bounds_.empty) return;

  nx_ = static_cast<std::int64_t>(std::floor((bounds_.max.x - bounds_.min.x) / cell_m_)) + 1;
  ny_ = static_cast<std::int64_t>(std::floor((bounds_.max.y - bounds_.min.y) / cell_m_)) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
  for (std::uint32_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i].p;
    const auto ix = std::min<std::int64_t>(nx_ - 1, static_cast<std::int64_t>((p.x - bounds_.min.x) / cell_m_));
    const auto iy = std::min<std::int64_t>(ny_ - 1, static_cast<std::int64_t>((p.y - bounds_.min.y) / cell_m_));
    buckets_[static_cast<std::size_t>(iy * nx_ + ix)].push_back(i);
  }
}

std::vector<std::uint32_t> CloudIndex::crop(Vec2 center, double side_m) const {
  std::vector<std::uint32_t> out;
  if (bounds_.empty) return out;
  const double half = side_m / 2.0;
  auto cell_range = [&](double lo, double hi, double origin, std::int64_t n) {
    const auto a = static_cast<std::int64_t>(std::floor((lo - origin) / cell_m_));
    const auto b = static_cast<std::int64_t>(std::floor((hi - origin) / cell_m_));
    return std::pair{std::clamp<std::int64_t>(a, 0, n - 1), std::clamp<std::int64_t>(b, 0, n - 1)};
  };
  if (center.x + half < bounds_.min.x || center.x - half > bounds_.max.x ||
      center.y + half < bounds_.min.y || center.y - half > bounds_.max.y) {
    return out;
  }
  const auto [x0, x1] = cell_range(center.x - half, center.x + half, bounds_.min.x, nx_);
  const auto [y0, y1] = cell_range(center.y - half, center.y + half, bounds_.min.y, ny_);
  for (auto iy = y0; iy <= y1; ++iy) {
    for (auto ix = x0; ix <= x1; ++ix) {
      for (std::uint32_t i : buckets_[static_cast<std::size_t>(iy * nx_ + ix)]) {
        if (in_window(cloud_->points[i].p.xy(), center, side_m)) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CloudIndex::instance_total(std::uint16_t semantic, std::uint32_t instance) const {
  const auto it = totals_.find(instance_key(semantic, instance));
  return it == totals_.end() ? 0 : it->second;
}

}  // namespace t2p
