#include "t2ploc/scene_graph.hpp"

#include <charconv>
#include <sstream>

#include "t2ploc/error.hpp"

namespace t2p {

SceneGraph build_scene_graph(const LocalMap& map, const GeoReference& georef,
                             const Taxonomy& taxonomy) {
  if (map.empty()) throw Error(ErrorCode::EmptyGraph, "scene graph of an empty map");
  SceneGraph graph;
  graph.nodes.reserve(map.objects.size());
  for (const auto& obj : map.objects) {
    graph.nodes.push_back({obj.id, taxonomy.at(obj.semantic).name,
                           world_to_pixel(obj.centroid, georef).pixel});
  }
  return graph;
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view line) : s_(line) {}

  void expect(std::string_view lit) {
    skip_ws();
    if (s_.substr(pos_, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  int integer() {
    skip_ws();
    int v = 0;
    const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected integer");
    pos_ = static_cast<std::size_t>(end - s_.data());
    return v;
  }

  std::string quoted() {
    expect("\"");
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    expect("\"");
    return out;
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::Parse, "scene graph line '" + std::string(s_) + "': " + why);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_scene_graph(const SceneGraph& graph) {
  std::string out;
  for (const auto& n : graph.nodes) {
    out += "{node_id: " + std::to_string(n.id) + ", label: " + quote(n.label) + ", pixel_center: [" +
           std::to_string(n.pixel_center.u) + ", " + std::to_string(n.pixel_center.v) + "]}\n";
  }
  return out;
}

SceneGraph parse_scene_graph(std::string_view text) {
  SceneGraph graph;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    LineReader r(line);
    SceneGraphNode n;
    r.expect("{");
    r.expect("node_id:");
    n.id = r.integer();
    r.expect(",");
    r.expect("label:");
    n.label = r.quoted();
    r.expect(",");
    r.expect("pixel_center:");
    r.expect("[");
    n.pixel_center.u = r.integer();
    r.expect(",");
    n.pixel_center.v = r.integer();
    r.expect("]");
    r.expect("}");
    r.finish();
    graph.nodes.push_back(std::move(n));
  }
  return graph;
}

nlohmann::json scene_graph_to_json(const SceneGraph& graph) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back({{"node_id", n.id},
                     {"label", n.label},
                     {"pixel_center", {n.pixel_center.u, n.pixel_center.v}}});
  }
  return {{"nodes", nodes}};
}

SceneGraph scene_graph_from_json(const nlohmann::json& doc) {
  SceneGraph graph;
  try {
    for (const auto& n : doc.at("nodes")) {
      const auto& pc = n.at("pixel_center");
      graph.nodes.push_back({n.at("node_id").get<int>(), n.at("label").get<std::string>(),
                             {pc.at(0).get<int>(), pc.at(1).get<int>()}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("scene_graph.json: ") + e.what());
  }
  return graph;
}

}  // namespace t2p
