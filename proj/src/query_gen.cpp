#include "t2ploc/query_gen.hpp"

#include <cstdio>
#include <numeric>

#include "t2ploc/error.hpp"

namespace t2p {

std::string make_query_id(int map_id, int query_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%05d-q%02d", map_id, query_index);
  return buf;
}

std::vector<Vec2> sample_query_locations(Vec2 center, std::size_t count, double radius, Rng& rng) {
  if (!(radius >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "query radius must be non-negative", "query.radius_m");
  }
  std::vector<Vec2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = rng.uniform(-radius, radius);
    const double dy = rng.uniform(-radius, radius);
    out.push_back({center.x + dx, center.y + dy});
  }
  return out;
}

PoseCell build_pose_cell(const CloudIndex& index, Vec2 xi, const MapBuildConfig& config) {
  LocalMap m = build_local_map(index, xi, config);
  return {xi, m.side_m, std::move(m.objects)};
}

std::optional<std::vector<std::size_t>> select_hint_objects(const PoseCell& cell, std::size_t n,
                                                            Rng& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "hint count must be at least 1", "query.hints");
  const std::size_t total = cell.objects.size();
  if (total < n) return std::nullopt;
  // Partial Fisher-Yates: the first n slots are the draw.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  return order;
}

Hint render_hint(const ObjectInstance& object, Vec2 xi, const ColorPalette& palette,
                 const Taxonomy& taxonomy, double delta) {
  Hint h;
  h.slots = {direction_of(xi, object, delta), palette.nearest(object.mean_color),
             taxonomy.at(object.semantic).name};
  h.text = render_hint_text(h.slots);
  h.source = {object.id, object.kind, object.semantic, object.source_id};
  return h;
}

std::optional<Query> generate_query(const LocalMap& map, const QueryContext& ctx, Vec2 xi,
                                    int query_index, Rng& rng) {
  const PoseCell cell = build_pose_cell(ctx.index, xi, ctx.map);
  if (cell.objects.empty()) return std::nullopt;
  const auto picked = select_hint_objects(cell, ctx.query.hints, rng);
  if (!picked) return std::nullopt;

  Query q;
  q.map_id = map.map_id;
  q.query_index = query_index;
  q.query_id = make_query_id(map.map_id, query_index);
  q.xi = xi;
  std::vector<const ObjectInstance*> sources;
  for (std::size_t k : *picked) {
    const auto& obj = cell.objects[k];
    q.hints.push_back(render_hint(obj, xi, ctx.palette, ctx.index.taxonomy(), ctx.query.delta_m));
    sources.push_back(&obj);
  }
  q.gt_assignments = label_query(sources, map, ctx.index.taxonomy(), ctx.tau);
  return q;
}

std::vector<ObjectInstance> hint_sources(const Query& query, const CloudIndex& index,
                                         const MapBuildConfig& config) {
  const PoseCell cell = build_pose_cell(index, query.xi, config);
  std::vector<ObjectInstance> out;
  for (const auto& h : query.hints) {
    const int k = h.source.cell_object;
    if (k < 0 || static_cast<std::size_t>(k) >= cell.objects.size()) {
      throw Error(ErrorCode::Integrity, query.query_id + ": hint source outside the rebuilt pose cell");
    }
    const auto& obj = cell.objects[static_cast<std::size_t>(k)];
    if (obj.semantic != h.source.semantic || obj.kind != h.source.kind ||
        obj.source_id != h.source.source_id) {
      throw Error(ErrorCode::Integrity, query.query_id + ": rebuilt pose cell does not match hint sources");
    }
    out.push_back(obj);
  }
  return out;
}

}  // namespace t2p
