#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "t2ploc/config.hpp"
#include "t2ploc/dataset.hpp"
#include "t2ploc/localization.hpp"
#include "t2ploc/pna.hpp"
#include "t2ploc/vlm_client.hpp"

namespace t2p {

struct RunOptions {
  int jobs = 1;
  TraceSink trace;  // VLM request/response log, token redacted
};

/// Stage runner over the dataset at config.paths.output. Each stage reads
/// what it needs from disk, writes its artifacts and the manifest, and
/// clears artifacts that depended on what it replaced. Outputs do not
/// depend on RunOptions::jobs. Each call returns a JSON summary.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config, RunOptions options = {});

  const PipelineConfig& config() const { return config_; }
  DatasetLayout layout() const { return DatasetLayout(config_.paths.output); }

  /// `sampling` overrides map.sampling when set.
  nlohmann::json build_maps(std::optional<std::string> sampling = std::nullopt);
  nlohmann::json render();
  nlohmann::json gen_queries();
  nlohmann::json label(AssignmentStrategy strategy);
  nlohmann::json localize(Method method);
  nlohmann::json evaluate();
  /// build-maps, render, gen-queries, label (partial), localize, evaluate.
  nlohmann::json run_all(Method method = Method::Oracle);

 private:
  PipelineConfig config_;
  RunOptions options_;
};

}  // namespace t2p
