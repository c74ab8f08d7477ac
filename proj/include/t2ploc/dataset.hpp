#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/bev.hpp"
#include "t2ploc/localization.hpp"
#include "t2ploc/object.hpp"
#include "t2ploc/query_gen.hpp"
#include "t2ploc/scene_graph.hpp"

namespace t2p {

// On-disk layout under one root directory:
//
//   manifest.json                 seed, config hash, resolved config, counts
//   maps/m00000/map.json          objects (points base64), georeference
//   maps/m00000/bev.png           after rendering
//   maps/m00000/scene_graph.json  after rendering
//   queries.jsonl                 sorted by map id, then query index
//   labels.jsonl                  same order
//   predictions.jsonl             sorted by query id
//
// Every JSON document is written with sorted keys.

struct MapRecord {
  LocalMap map;
  GeoReference georef;
  std::optional<BevImage> bev;
  std::optional<SceneGraph> graph;

  friend bool operator==(const MapRecord&, const MapRecord&) = default;
};

struct LabelRecord {
  std::string query_id;
  int map_id = 0;
  int query_index = 0;
  AssignmentStrategy strategy = AssignmentStrategy::Partial;
  std::vector<Assignment> assignments;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

struct Manifest {
  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json config = nlohmann::json::object();
  std::size_t maps = 0;
  std::size_t queries = 0;
  std::size_t labels = 0;
  std::size_t predictions = 0;
  bool rendered = false;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Dataset {
  Manifest manifest;
  std::vector<MapRecord> maps;
  std::vector<Query> queries;
  std::vector<LabelRecord> labels;
  std::vector<LocalizationResult> predictions;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

class DatasetLayout {
 public:
  explicit DatasetLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path manifest() const { return root_ / "manifest.json"; }
  std::filesystem::path maps_dir() const { return root_ / "maps"; }
  std::filesystem::path map_dir(int map_id) const;
  std::filesystem::path map_json(int map_id) const { return map_dir(map_id) / "map.json"; }
  std::filesystem::path bev_png(int map_id) const { return map_dir(map_id) / "bev.png"; }
  std::filesystem::path scene_graph_json(int map_id) const { return map_dir(map_id) / "scene_graph.json"; }
  std::filesystem::path queries() const { return root_ / "queries.jsonl"; }
  std::filesystem::path labels() const { return root_ / "labels.jsonl"; }
  std::filesystem::path predictions() const { return root_ / "predictions.jsonl"; }
  std::filesystem::path report_json() const { return root_ / "report.json"; }
  std::filesystem::path report_csv() const { return root_ / "report.csv"; }
  std::filesystem::path buckets_csv() const { return root_ / "buckets.csv"; }

 private:
  std::filesystem::path root_;
};

nlohmann::json map_to_json(const LocalMap& map, const GeoReference& georef);
MapRecord map_from_json(const nlohmann::json& doc);
nlohmann::json query_to_json(const Query& q);
Query query_from_json(const nlohmann::json& doc);
nlohmann::json label_to_json(const LabelRecord& r);
LabelRecord label_from_json(const nlohmann::json& doc);
nlohmann::json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& doc);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

void write_map(const DatasetLayout& layout, const MapRecord& record);
/// Loads map.json, plus bev.png and scene_graph.json when `rendered`.
MapRecord read_map(const DatasetLayout& layout, int map_id, bool rendered);
std::vector<int> list_map_ids(const DatasetLayout& layout);

void write_queries(const DatasetLayout& layout, std::vector<Query> queries);
std::vector<Query> read_queries(const DatasetLayout& layout);
void write_labels(const DatasetLayout& layout, std::vector<LabelRecord> labels);
std::vector<LabelRecord> read_labels(const DatasetLayout& layout);
void write_predictions(const DatasetLayout& layout, std::vector<LocalizationResult> predictions);
std::vector<LocalizationResult> read_predictions(const DatasetLayout& layout);

void write_manifest(const DatasetLayout& layout, const Manifest& manifest);
/// Throws Integrity when the manifest is missing.
Manifest read_manifest(const DatasetLayout& layout);

/// Writes every artifact and a manifest whose counts match them.
void write_dataset(const DatasetLayout& layout, Dataset dataset);
/// Reads and cross-checks everything against the manifest; any mismatch
/// (missing file, count drift, dangling map id) throws Integrity.
Dataset read_dataset(const DatasetLayout& layout);

}  // namespace t2p
