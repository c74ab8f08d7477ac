#pragma once

#include <stdexcept>
#include <string>

namespace t2p {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  Taxonomy,
  EmptyObject,
  EmptyTrajectory,
  EmptyGraph,
  Range,
  Integrity,
  Config,
  Io,
  // Malformed model output. Each kind drives one retry in the VLM client.
  NoJson,
  Schema,
  OutOfRaster,
  Transport,
  Auth,
  UndefinedMetric,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the toolkit. `field()` names the offending
/// config key or input when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

  bool is_malformed_output() const noexcept {
    return code_ == ErrorCode::NoJson || code_ == ErrorCode::Schema ||
           code_ == ErrorCode::OutOfRaster;
  }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace t2p
