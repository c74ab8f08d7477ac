#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "t2ploc/scene_graph.hpp"

namespace t2p {

/// Reads the system prompt resource. Throws Config when it is missing or
/// empty.
std::string load_system_prompt(const std::filesystem::path& path);

/// User turn text: serialized scene graph followed by the hint sentences.
std::string compose_user_text(const SceneGraph& graph, std::span<const std::string> hint_texts);

/// OpenAI-compatible chat-completions request body. The BEV image is
/// attached as a base64 PNG data URL; decoding is greedy (temperature 0).
/// Throws EmptyGraph when the graph has no nodes.
nlohmann::json assemble_prompt(const SceneGraph& graph, std::span<const std::string> hint_texts,
                               const std::string& system_text, std::string_view bev_png,
                               const std::string& model);

}  // namespace t2p
