#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/geometry.hpp"
#include "t2ploc/object.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

struct SceneGraphNode {
  int id = 0;  // map object id
  std::string label;
  PixelCoord pixel_center;

  friend bool operator==(const SceneGraphNode&, const SceneGraphNode&) = default;
};

/// Node set only; spatial relations are carried by the pixel centers.
struct SceneGraph {
  std::vector<SceneGraphNode> nodes;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

/// One node per map object, in object id order. Throws EmptyGraph for an
/// empty map.
SceneGraph build_scene_graph(const LocalMap& map, const GeoReference& georef,
                             const Taxonomy& taxonomy);

/// One line per node:
///   {node_id: 0, label: "road", pixel_center: [45, 135]}
std::string serialize_scene_graph(const SceneGraph& graph);
SceneGraph parse_scene_graph(std::string_view text);

nlohmann::json scene_graph_to_json(const SceneGraph& graph);
SceneGraph scene_graph_from_json(const nlohmann::json& doc);

}  // namespace t2p
