#include "t2ploc/prompt.hpp"

#include <fstream>
#include <sstream>

#include "t2ploc/codec.hpp"
#include "t2ploc/error.hpp"

namespace t2p {

std::string load_system_prompt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open system prompt " + path.string(), "paths.system_prompt");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  if (text.empty()) throw Error(ErrorCode::Config, "system prompt is empty", "paths.system_prompt");
  return text;
}

std::string compose_user_text(const SceneGraph& graph, std::span<const std::string> hint_texts) {
  std::string text = "Scene graph:\n" + serialize_scene_graph(graph) + "\nDescription:";
  for (const auto& h : hint_texts) text += " " + h;
  return text;
}

nlohmann::json assemble_prompt(const SceneGraph& graph, std::span<const std::string> hint_texts,
                               const std::string& system_text, std::string_view bev_png,
                               const std::string& model) {
  if (graph.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "prompt needs at least one scene-graph node");
  const nlohmann::json user_content = nlohmann::json::array({
      {{"type", "image_url"},
       {"image_url", {{"url", "data:image/png;base64," + base64_encode(bev_png)}}}},
      {{"type", "text"}, {"text", compose_user_text(graph, hint_texts)}},
  });
  return {
      {"model", model},
      {"temperature", 0},
      {"top_p", 1},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", system_text}},
                              {{"role", "user"}, {"content", user_content}}})},
  };
}

}  // namespace t2p
