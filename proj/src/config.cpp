#include "t2ploc/config.hpp"

#include <fstream>
#include <sstream>

#include "t2ploc/codec.hpp"
#include "t2ploc/error.hpp"

#ifndef T2P_DEFAULT_DATA_DIR
#define T2P_DEFAULT_DATA_DIR "data"
#endif

namespace t2p {

using nlohmann::json;

PipelineConfig::PipelineConfig() {
  paths.palette = std::string(T2P_DEFAULT_DATA_DIR) + "/palette.json";
  paths.system_prompt = std::string(T2P_DEFAULT_DATA_DIR) + "/system_prompt.txt";
}

MapBuildConfig PipelineConfig::map_build() const {
  return {side_m, cluster, cluster_overrides};
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw Error(ErrorCode::Config, std::string(field) + ": " + what, field);
  };
  require(sampling == "trajectory" || sampling == "grid", "map.sampling", "must be 'trajectory' or 'grid'");
  require(side_m > 0.0, "map.side_m", "must be positive");
  require(raster_px >= 2, "map.raster_px", "must be at least 2");
  require(min_spacing_m > 0.0, "map.min_spacing_m", "must be positive");
  require(grid_pitch_m > 0.0, "map.grid_pitch_m", "must be positive");
  require(cluster.eps > 0.0, "cluster.eps", "must be positive");
  require(cluster.min_pts >= 1, "cluster.min_pts", "must be at least 1");
  for (const auto& [id, p] : cluster_overrides) {
    require(p.eps > 0.0 && p.min_pts >= 1, "cluster.overrides", "override needs eps > 0 and min_pts >= 1");
  }
  require(query.per_center >= 1, "query.per_center", "must be at least 1");
  require(query.radius_m >= 0.0, "query.radius_m", "must be non-negative");
  require(query.hints >= 1, "query.hints", "must be at least 1");
  require(query.delta_m > 0.0, "query.delta_m", "must be positive");
  require(tau.object_m > 0.0, "pna.tau_object_m", "must be positive");
  require(tau.stuff_m > 0.0, "pna.tau_stuff_m", "must be positive");
  require(oracle_grid.pitch_m > 0.0 && oracle_grid.pitch_m <= side_m, "localize.grid_pitch_m", "must be in (0, S]");
  require(!recall_k.empty(), "eval.recall_k", "must list at least one threshold");
  for (double k : recall_k) require(k > 0.0, "eval.recall_k", "thresholds must be positive");
  try {
    endpoint.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what(), e.field());
  }
}

json config_to_json(const PipelineConfig& c) {
  json overrides = json::object();
  for (const auto& [id, p] : c.cluster_overrides) {
    overrides[std::to_string(id)] = {{"eps", p.eps}, {"min_pts", p.min_pts}};
  }
  return {
      {"paths",
       {{"cloud", c.paths.cloud},
        {"trajectory", c.paths.trajectory},
        {"taxonomy", c.paths.taxonomy},
        {"palette", c.paths.palette},
        {"system_prompt", c.paths.system_prompt},
        {"output", c.paths.output}}},
      {"map",
       {{"sampling", c.sampling},
        {"side_m", c.side_m},
        {"raster_px", c.raster_px},
        {"min_spacing_m", c.min_spacing_m},
        {"grid_pitch_m", c.grid_pitch_m},
        {"grid_min_objects", c.grid_min_objects}}},
      {"cluster", {{"eps", c.cluster.eps}, {"min_pts", c.cluster.min_pts}, {"overrides", overrides}}},
      {"query",
       {{"per_center", c.query.per_center},
        {"radius_m", c.query.radius_m},
        {"hints", c.query.hints},
        {"delta_m", c.query.delta_m}}},
      {"pna", {{"tau_object_m", c.tau.object_m}, {"tau_stuff_m", c.tau.stuff_m}}},
      {"localize", {{"grid_pitch_m", c.oracle_grid.pitch_m}}},
      {"endpoint",
       {{"base_url", c.endpoint.base_url},
        {"model", c.endpoint.model},
        {"token_env", c.endpoint.token_env},
        {"timeout_s", c.endpoint.timeout_s},
        {"max_retries", c.endpoint.max_retries},
        {"max_in_flight", c.endpoint.max_in_flight}}},
      {"eval", {{"recall_k", c.recall_k}}},
      {"seed", c.seed},
  };
}

namespace {

bool same_type(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    // Integer slots reject fractional values.
    if (a.is_number_integer() && b.is_number_float()) return false;
    if (a.is_number_unsigned() && b.is_number_integer() && !b.is_number_unsigned()) return b.get<std::int64_t>() >= 0;
    return true;
  }
  return a.type() == b.type();
}

// Overlays `src` onto `dst`, which holds the full default shape.
void overlay(json& dst, const json& src, const std::string& prefix) {
  for (const auto& [key, value] : src.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!dst.contains(key)) throw Error(ErrorCode::Config, "unknown config key '" + path + "'", path);
    json& slot = dst[key];
    if (path == "cluster.overrides") {
      if (!value.is_object()) throw Error(ErrorCode::Config, path + " must be an object", path);
      slot = value;
    } else if (slot.is_object()) {
      if (!value.is_object()) throw Error(ErrorCode::Config, path + " must be an object", path);
      overlay(slot, value, path);
    } else {
      if (!same_type(slot, value)) throw Error(ErrorCode::Config, path + " has the wrong type", path);
      slot = value;
    }
  }
}

PipelineConfig decode(const json& j) {
  PipelineConfig c;
  const auto& p = j.at("paths");
  c.paths = {p.at("cloud"), p.at("trajectory"), p.at("taxonomy"), p.at("palette"), p.at("system_prompt"),
             p.at("output")};
  const auto& m = j.at("map");
  c.sampling = m.at("sampling");
  c.side_m = m.at("side_m");
  c.raster_px = m.at("raster_px");
  c.min_spacing_m = m.at("min_spacing_m");
  c.grid_pitch_m = m.at("grid_pitch_m");
  c.grid_min_objects = m.at("grid_min_objects");
  const auto& cl = j.at("cluster");
  c.cluster = {cl.at("eps"), cl.at("min_pts")};
  for (const auto& [id, o] : cl.at("overrides").items()) {
    std::size_t used = 0;
    unsigned long sid = 0;
    try {
      sid = std::stoul(id, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != id.size() || sid > 65535) {
      throw Error(ErrorCode::Config, "cluster override key '" + id + "' is not a label id", "cluster.overrides");
    }
    c.cluster_overrides[static_cast<std::uint16_t>(sid)] = {o.at("eps"), o.at("min_pts")};
  }
  const auto& q = j.at("query");
  c.query = {q.at("per_center"), q.at("radius_m"), q.at("hints"), q.at("delta_m")};
  c.tau = {j.at("pna").at("tau_object_m"), j.at("pna").at("tau_stuff_m")};
  c.oracle_grid = {j.at("localize").at("grid_pitch_m")};
  const auto& e = j.at("endpoint");
  c.endpoint = {e.at("base_url"), e.at("model"), e.at("token_env"), e.at("timeout_s"), e.at("max_retries"),
                e.at("max_in_flight")};
  c.recall_k = j.at("eval").at("recall_k").get<std::vector<double>>();
  c.seed = j.at("seed");
  return c;
}

}  // namespace

PipelineConfig config_from_json(const json& doc, const PipelineConfig& base) {
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  json merged = config_to_json(base);
  overlay(merged, doc, "");
  try {
    return decode(merged);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config " + path.string(), "config");
  std::stringstream ss;
  ss << in.rdbuf();
  auto doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Config, "config file is not valid JSON", "config");
  if (doc.is_object() && doc.contains("paths") && doc["paths"].is_object()) {
    const auto base = path.parent_path();
    for (auto& [key, value] : doc["paths"].items()) {
      if (!value.is_string() || value.get<std::string>().empty()) continue;
      const std::filesystem::path p = value.get<std::string>();
      if (p.is_relative()) value = (base / p).lexically_normal().string();
    }
  }
  return config_from_json(doc);
}

void set_config_field(PipelineConfig& config, std::string_view key, const json& value) {
  json patch = value;
  std::string k(key);
  for (auto dot = k.rfind('.'); dot != std::string::npos; dot = k.rfind('.')) {
    patch = json{{k.substr(dot + 1), patch}};
    k.resize(dot);
  }
  patch = json{{k, patch}};
  config = config_from_json(patch, config);
}

std::string config_hash(const PipelineConfig& config) { return sha256_hex(config_to_json(config).dump()); }

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      {"paths.cloud", "instance-annotated point cloud (binary T2PC or 8-column text)"},
      {"paths.trajectory", "trajectory file, one 'x y' pose per line"},
      {"paths.taxonomy", "taxonomy JSON (label id -> name, object|stuff)"},
      {"paths.palette", "palette JSON (color name -> [r,g,b])"},
      {"paths.system_prompt", "system prompt text for the VLM endpoint"},
      {"paths.output", "dataset output root"},
      {"map.sampling", "map center sampling: trajectory | grid"},
      {"map.side_m", "map / pose-cell side S in meters"},
      {"map.raster_px", "BEV raster size H = W in pixels"},
      {"map.min_spacing_m", "minimum spacing between trajectory map centers, meters"},
      {"map.grid_pitch_m", "grid sampling pitch, meters"},
      {"map.grid_min_objects", "grid sampling keeps maps with strictly more objects than this"},
      {"cluster.eps", "DBSCAN neighborhood radius for stuff, meters"},
      {"cluster.min_pts", "DBSCAN core-point neighborhood size (point included)"},
      {"cluster.overrides", "per-label DBSCAN parameters: {\"<label id>\": {\"eps\", \"min_pts\"}}"},
      {"query.per_center", "query locations sampled per map center"},
      {"query.radius_m", "query offset range +/- meters along East and North"},
      {"query.hints", "hints per query (N_t)"},
      {"query.delta_m", "on-top distance, meters"},
      {"pna.tau_object_m", "groundability threshold for object classes, meters"},
      {"pna.tau_stuff_m", "groundability threshold for stuff classes, meters"},
      {"localize.grid_pitch_m", "oracle localizer candidate spacing, meters"},
      {"endpoint.base_url", "OpenAI-compatible API base URL"},
      {"endpoint.model", "model name sent with each request"},
      {"endpoint.token_env", "environment variable holding the bearer token"},
      {"endpoint.timeout_s", "request timeout, seconds"},
      {"endpoint.max_retries", "retries after malformed output or transport failure"},
      {"endpoint.max_in_flight", "concurrent requests"},
      {"eval.recall_k", "recall thresholds K in meters"},
      {"seed", "master random seed"},
  };
  return fields;
}

}  // namespace t2p
