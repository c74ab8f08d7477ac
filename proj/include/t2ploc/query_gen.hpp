#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "t2ploc/cloud_index.hpp"
#include "t2ploc/hint.hpp"
#include "t2ploc/map_builder.hpp"
#include "t2ploc/palette.hpp"
#include "t2ploc/pna.hpp"
#include "t2ploc/random.hpp"

namespace t2p {

/// Which pose-cell object a hint describes.
struct HintSource {
  int cell_object = 0;  // object id within the pose cell
  Kind kind = Kind::Object;
  std::uint16_t semantic = 0;
  std::uint32_t source_id = 0;

  friend bool operator==(const HintSource&, const HintSource&) = default;
};

struct Hint {
  HintText slots;
  std::string text;
  HintSource source;

  friend bool operator==(const Hint&, const Hint&) = default;
};

struct Query {
  std::string query_id;
  int map_id = 0;
  int query_index = 0;
  Vec2 xi;
  std::vector<Hint> hints;
  std::vector<Assignment> gt_assignments;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Window of the same side as the map, centered on the query location and
/// built with the same procedure.
struct PoseCell {
  Vec2 xi;
  double side_m = 50.0;
  std::vector<ObjectInstance> objects;
};

struct QueryConfig {
  std::size_t per_center = 4;
  double radius_m = 15.0;
  std::size_t hints = 6;
  double delta_m = kDefaultOnTopDistance;
};

std::string make_query_id(int map_id, int query_index);

/// center + (U(-r, r), U(-r, r)) per location.
std::vector<Vec2> sample_query_locations(Vec2 center, std::size_t count, double radius, Rng& rng);

PoseCell build_pose_cell(const CloudIndex& index, Vec2 xi, const MapBuildConfig& config);

/// n distinct cell object indices, uniformly without replacement, in draw
/// order. nullopt when the cell holds fewer than n objects.
std::optional<std::vector<std::size_t>> select_hint_objects(const PoseCell& cell, std::size_t n,
                                                            Rng& rng);

Hint render_hint(const ObjectInstance& object, Vec2 xi, const ColorPalette& palette,
                 const Taxonomy& taxonomy, double delta);

struct QueryContext {
  const CloudIndex& index;
  const ColorPalette& palette;
  MapBuildConfig map;
  QueryConfig query;
  TauConfig tau;
};

/// Pose cell -> hint objects -> hints -> ground-truth assignments.
/// nullopt when the cell is empty or too small for the hint count.
std::optional<Query> generate_query(const LocalMap& map, const QueryContext& ctx, Vec2 xi,
                                    int query_index, Rng& rng);

/// Pose-cell objects a query's hints were drawn from, in hint order.
/// Rebuilds the cell; throws Integrity if it no longer matches the hints.
std::vector<ObjectInstance> hint_sources(const Query& query, const CloudIndex& index,
                                         const MapBuildConfig& config);

}  // namespace t2p
