#include "t2ploc/error.hpp"

namespace t2p {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Taxonomy: return "taxonomy_error";
    case ErrorCode::EmptyObject: return "empty_object";
    case ErrorCode::EmptyTrajectory: return "empty_trajectory";
    case ErrorCode::EmptyGraph: return "empty_graph";
    case ErrorCode::Range: return "range_error";
    case ErrorCode::Integrity: return "integrity_error";
    case ErrorCode::Config: return "config_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::NoJson: return "malformed_output_no_json";
    case ErrorCode::Schema: return "malformed_output_schema";
    case ErrorCode::OutOfRaster: return "malformed_output_out_of_raster";
    case ErrorCode::Transport: return "transport_error";
    case ErrorCode::Auth: return "auth_error";
    case ErrorCode::UndefinedMetric: return "undefined_metric";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string field)
    : std::runtime_error(message), code_(code), field_(std::move(field)) {}

}  // namespace t2p
