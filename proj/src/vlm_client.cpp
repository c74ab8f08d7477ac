#include "t2ploc/vlm_client.hpp"

#include <httplib.h>

#include <cstdlib>

#include "t2ploc/error.hpp"
#include "t2ploc/model_output.hpp"
#include "t2ploc/prompt.hpp"

namespace t2p {

void EndpointConfig::validate() const {
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
    throw Error(ErrorCode::Config, "endpoint URL must start with http:// or https://", "endpoint.base_url");
  }
  if (!(timeout_s > 0.0)) throw Error(ErrorCode::Config, "timeout must be positive", "endpoint.timeout_s");
  if (max_retries < 0) throw Error(ErrorCode::Config, "retries must be non-negative", "endpoint.max_retries");
  if (max_in_flight < 1) throw Error(ErrorCode::Config, "in-flight limit must be at least 1", "endpoint.max_in_flight");
}

VlmClient::VlmClient(EndpointConfig endpoint, std::string system_text, TraceSink trace)
    : endpoint_(std::move(endpoint)), system_text_(std::move(system_text)), trace_(std::move(trace)) {
  endpoint_.validate();
  const auto scheme_end = endpoint_.base_url.find("://") + 3;
  const auto path_start = endpoint_.base_url.find('/', scheme_end);
  scheme_host_port_ = endpoint_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : endpoint_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string VlmClient::complete(const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  const auto secs = static_cast<time_t>(endpoint_.timeout_s);
  const auto usecs = static_cast<time_t>((endpoint_.timeout_s - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  const char* token = endpoint_.token_env.empty() ? nullptr : std::getenv(endpoint_.token_env.c_str());
  if (token && *token) headers.emplace("Authorization", std::string("Bearer ") + token);

  const std::string path = path_prefix_ + "/chat/completions";
  if (trace_) {
    trace_("POST " + scheme_host_port_ + path + (token && *token ? " (Authorization: Bearer ***)" : ""));
    trace_(body);
  }
  const auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::Transport, "request failed: " + httplib::to_string(res.error()));
  }
  if (trace_) trace_("HTTP " + std::to_string(res->status) + " " + res->body);
  if (res->status == 401 || res->status == 403) {
    throw Error(ErrorCode::Auth, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::Transport, "endpoint returned HTTP " + std::to_string(res->status));
  }
  const auto doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
    throw Error(ErrorCode::Transport, "response is not a chat completion");
  }
  const auto& msg = doc["choices"][0];
  if (!msg.contains("message") || !msg["message"].contains("content") ||
      !msg["message"]["content"].is_string()) {
    throw Error(ErrorCode::Transport, "chat completion has no message content");
  }
  return msg["message"]["content"].get<std::string>();
}

LocalizationResult VlmClient::localize(const std::string& query_id, const BevImage& bev,
                                       const SceneGraph& graph,
                                       std::span<const std::string> hint_texts) const {
  LocalizationResult result;
  result.query_id = query_id;
  result.method = Method::Vlm;

  std::string body;
  try {
    body = assemble_prompt(graph, hint_texts, system_text_, encode_png(bev), endpoint_.model).dump();
  } catch (const Error& e) {
    result.failure = std::string(error_code_name(e.code())) + ": " + e.what();
    return result;
  }

  const int attempts = 1 + endpoint_.max_retries;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    result.attempts = attempt;
    try {
      result.raw_output = complete(body);
      const ModelPrediction pred = parse_model_output(result.raw_output, bev.georef());
      result.ok = true;
      result.failure.clear();
      result.assignments = pred.assignments;
      result.predicted_pixel = pred.point_2d;
      result.predicted_world = pixel_to_world(pred.point_2d, bev.georef());
      return result;
    } catch (const Error& e) {
      result.failure = std::string(error_code_name(e.code())) + ": " + e.what();
      if (e.code() == ErrorCode::Auth) break;
    } catch (const std::exception& e) {
      result.failure = std::string(error_code_name(ErrorCode::Transport)) + ": " + e.what();
    }
  }
  return result;
}

}  // namespace t2p
