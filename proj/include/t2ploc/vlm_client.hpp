#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "t2ploc/bev.hpp"
#include "t2ploc/localization.hpp"
#include "t2ploc/scene_graph.hpp"

namespace t2p {

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";  // .../chat/completions is appended
  std::string model = "localizer";
  std::string token_env = "T2P_API_TOKEN";  // unset or empty -> no auth header
  double timeout_s = 120.0;
  int max_retries = 2;  // extra attempts after malformed output or transport failure
  int max_in_flight = 4;

  void validate() const;
};

using TraceSink = std::function<void(std::string_view)>;

/// Chat-completions client for a remote localization model. Never throws
/// for remote misbehavior: every call yields one result record.
class VlmClient {
 public:
  VlmClient(EndpointConfig endpoint, std::string system_text, TraceSink trace = {});

  LocalizationResult localize(const std::string& query_id, const BevImage& bev,
                              const SceneGraph& graph, std::span<const std::string> hint_texts) const;

 private:
  /// Returns the assistant message content. Throws Transport or Auth.
  std::string complete(const std::string& body) const;

  EndpointConfig endpoint_;
  std::string system_text_;
  TraceSink trace_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace t2p
