#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/map_builder.hpp"
#include "t2ploc/oracle.hpp"
#include "t2ploc/pna.hpp"
#include "t2ploc/query_gen.hpp"
#include "t2ploc/vlm_client.hpp"

namespace t2p {

struct PathsConfig {
  std::string cloud;
  std::string trajectory;
  std::string taxonomy;
  std::string palette;        // defaults to the bundled palette.json
  std::string system_prompt;  // defaults to the bundled system_prompt.txt
  std::string output = "t2p_out";
};

/// Resolved pipeline configuration. Every field has a dotted key (see
/// config_fields()) usable from JSON files and command-line overrides.
struct PipelineConfig {
  PipelineConfig();

  PathsConfig paths;
  std::string sampling = "trajectory";  // or "grid"
  double side_m = 50.0;
  int raster_px = 224;
  double min_spacing_m = 10.0;
  double grid_pitch_m = 50.0;
  std::size_t grid_min_objects = 6;
  ClusterParams cluster;
  std::map<std::uint16_t, ClusterParams> cluster_overrides;
  QueryConfig query;
  TauConfig tau;
  GridConfig oracle_grid;
  EndpointConfig endpoint;
  std::vector<double> recall_k{5.0, 10.0, 15.0};
  std::uint64_t seed = 0;

  MapBuildConfig map_build() const;
  GeoReference georef_for(Vec2 center) const { return GeoReference::square(center, side_m, raster_px); }

  /// Value checks only; input files are checked by the stage that needs them.
  void validate() const;
};

nlohmann::json config_to_json(const PipelineConfig& config);
/// Fields absent from `doc` keep their value in `base`; unknown keys throw
/// Config naming the key.
PipelineConfig config_from_json(const nlohmann::json& doc, const PipelineConfig& base = {});
/// Relative paths.* values resolve against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Sets one dotted key, e.g. ("query.hints", 6). Throws Config naming the
/// key when it is unknown or the value has the wrong type.
void set_config_field(PipelineConfig& config, std::string_view key, const nlohmann::json& value);

/// SHA-256 of the canonical (sorted-key) config JSON.
std::string config_hash(const PipelineConfig& config);

struct ConfigField {
  std::string key;
  std::string help;
};

/// Every dotted key in the order they are documented.
const std::vector<ConfigField>& config_fields();

}  // namespace t2p
