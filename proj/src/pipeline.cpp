#include "t2ploc/pipeline.hpp"

#include <filesystem>
#include <map>

#include "t2ploc/cloud_index.hpp"
#include "t2ploc/error.hpp"
#include "t2ploc/eval.hpp"
#include "t2ploc/map_builder.hpp"
#include "t2ploc/oracle.hpp"
#include "t2ploc/palette.hpp"
#include "t2ploc/parallel.hpp"
#include "t2ploc/point_cloud.hpp"
#include "t2ploc/prompt.hpp"
#include "t2ploc/query_gen.hpp"
#include "t2ploc/taxonomy.hpp"
#include "t2ploc/trajectory.hpp"

namespace t2p {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum : std::uint64_t { kStreamQueryLocations = 1, kStreamQuery = 2 };

const std::string& require_path(const std::string& value, const char* field) {
  if (value.empty()) throw Error(ErrorCode::Config, std::string(field) + " is not set", field);
  if (!fs::is_regular_file(value)) {
    throw Error(ErrorCode::Config, std::string(field) + ": no such file '" + value + "'", field);
  }
  return value;
}

struct Inputs {
  Taxonomy taxonomy;
  InstancePointCloud cloud;
};

Inputs load_inputs(const PipelineConfig& c) {
  const auto& cloud_path = require_path(c.paths.cloud, "paths.cloud");
  auto taxonomy = Taxonomy::load(require_path(c.paths.taxonomy, "paths.taxonomy"));
  auto cloud = load_point_cloud(cloud_path, taxonomy);
  return {std::move(taxonomy), std::move(cloud)};
}

ColorPalette load_palette(const PipelineConfig& c) {
  return ColorPalette::load(require_path(c.paths.palette, "paths.palette"));
}

// Config sections a built map depends on.
json map_inputs(const json& config) {
  return {{"side_m", config.at("map").at("side_m")},
          {"raster_px", config.at("map").at("raster_px")},
          {"cluster", config.at("cluster")},
          {"cloud", config.at("paths").at("cloud")},
          {"taxonomy", config.at("paths").at("taxonomy")}};
}

void remove_file(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

void clear_report(const DatasetLayout& layout) {
  remove_file(layout.report_json());
  remove_file(layout.report_csv());
  remove_file(layout.buckets_csv());
}

std::vector<std::string> hint_texts(const Query& q) {
  std::vector<std::string> out;
  out.reserve(q.hints.size());
  for (const auto& h : q.hints) out.push_back(h.text);
  return out;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, RunOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  config_.validate();
  if (config_.paths.output.empty()) throw Error(ErrorCode::Config, "paths.output is not set", "paths.output");
  if (options_.jobs < 1) throw Error(ErrorCode::Config, "jobs must be at least 1", "jobs");
}

json Pipeline::build_maps(std::optional<std::string> sampling) {
  if (sampling) set_config_field(config_, "map.sampling", *sampling);
  const auto inputs = load_inputs(config_);
  const CloudIndex index(inputs.cloud, inputs.taxonomy);
  const auto build = config_.map_build();

  std::vector<Vec2> centers;
  if (config_.sampling == "trajectory") {
    const auto traj = load_trajectory(require_path(config_.paths.trajectory, "paths.trajectory"));
    centers = sample_map_centers(traj, config_.min_spacing_m);
  } else {
    centers = grid_sample_centers(index, config_.grid_pitch_m, config_.grid_min_objects, build);
  }

  std::vector<LocalMap> built(centers.size());
  parallel_for(centers.size(), options_.jobs, [&](std::size_t i) { built[i] = build_local_map(index, centers[i], build); });

  Dataset ds;
  for (auto& m : built) {
    if (m.empty()) continue;
    m.map_id = static_cast<int>(ds.maps.size());
    const auto georef = config_.georef_for(m.center);
    ds.maps.push_back({std::move(m), georef, std::nullopt, std::nullopt});
  }
  ds.manifest.seed = config_.seed;
  ds.manifest.config = config_to_json(config_);
  ds.manifest.config_hash = config_hash(config_);
  const auto l = layout();
  fs::create_directories(l.root());
  clear_report(l);
  write_dataset(l, std::move(ds));
  return {{"stage", "build-maps"}, {"centers", centers.size()}, {"maps", read_manifest(l).maps}};
}

namespace {

// Loads a dataset and checks its maps were built under the same map
// configuration as `config`.
Dataset open_dataset(const DatasetLayout& layout, const PipelineConfig& config) {
  auto ds = read_dataset(layout);
  if (map_inputs(ds.manifest.config) != map_inputs(config_to_json(config))) {
    throw Error(ErrorCode::Config,
                "dataset maps were built with different map/cluster settings or inputs; rerun build-maps",
                "map");
  }
  return ds;
}

void stamp(Manifest& m, const PipelineConfig& config) {
  m.config = config_to_json(config);
  m.config_hash = config_hash(config);
  m.seed = config.seed;
}

}  // namespace

json Pipeline::render() {
  const auto l = layout();
  auto ds = open_dataset(l, config_);
  const auto taxonomy = Taxonomy::load(require_path(config_.paths.taxonomy, "paths.taxonomy"));
  parallel_for(ds.maps.size(), options_.jobs, [&](std::size_t i) {
    auto& rec = ds.maps[i];
    rec.bev = render_bev(rec.map, rec.georef);
    rec.graph = build_scene_graph(rec.map, rec.georef, taxonomy);
  });
  for (const auto& rec : ds.maps) write_map(l, rec);
  ds.manifest.rendered = !ds.maps.empty();
  stamp(ds.manifest, config_);
  write_manifest(l, ds.manifest);
  return {{"stage", "render"}, {"maps", ds.maps.size()}};
}

json Pipeline::gen_queries() {
  const auto l = layout();
  auto ds = open_dataset(l, config_);
  const auto inputs = load_inputs(config_);
  const auto palette = load_palette(config_);
  const CloudIndex index(inputs.cloud, inputs.taxonomy);
  const QueryContext ctx{index, palette, config_.map_build(), config_.query, config_.tau};

  std::vector<std::vector<Query>> per_map(ds.maps.size());
  std::vector<std::size_t> skipped(ds.maps.size(), 0);
  parallel_for(ds.maps.size(), options_.jobs, [&](std::size_t i) {
    const auto& map = ds.maps[i].map;
    const auto id = static_cast<std::uint64_t>(map.map_id);
    Rng loc_rng(derive_seed(config_.seed, {kStreamQueryLocations, id}));
    const auto locations = sample_query_locations(map.center, config_.query.per_center, config_.query.radius_m, loc_rng);
    for (std::size_t q = 0; q < locations.size(); ++q) {
      Rng rng(derive_seed(config_.seed, {kStreamQuery, id, q}));
      auto query = generate_query(map, ctx, locations[q], static_cast<int>(q), rng);
      if (query) {
        per_map[i].push_back(std::move(*query));
      } else {
        ++skipped[i];
      }
    }
  });

  std::vector<Query> queries;
  std::size_t n_skipped = 0;
  for (std::size_t i = 0; i < per_map.size(); ++i) {
    n_skipped += skipped[i];
    for (auto& q : per_map[i]) queries.push_back(std::move(q));
  }
  const std::size_t n = queries.size();
  write_queries(l, std::move(queries));
  write_labels(l, {});
  write_predictions(l, {});
  clear_report(l);
  ds.manifest.queries = n;
  ds.manifest.labels = 0;
  ds.manifest.predictions = 0;
  stamp(ds.manifest, config_);
  write_manifest(l, ds.manifest);
  return {{"stage", "gen-queries"}, {"queries", n}, {"skipped", n_skipped}};
}

json Pipeline::label(AssignmentStrategy strategy) {
  const auto l = layout();
  auto ds = open_dataset(l, config_);
  const auto inputs = load_inputs(config_);
  const CloudIndex index(inputs.cloud, inputs.taxonomy);
  const auto build = config_.map_build();

  std::map<int, const LocalMap*> maps;
  for (const auto& rec : ds.maps) maps[rec.map.map_id] = &rec.map;

  std::vector<LabelRecord> labels(ds.queries.size());
  parallel_for(ds.queries.size(), options_.jobs, [&](std::size_t i) {
    const auto& q = ds.queries[i];
    const auto sources = hint_sources(q, index, build);
    std::vector<const ObjectInstance*> ptrs;
    for (const auto& o : sources) ptrs.push_back(&o);
    const LocalMap& map = *maps.at(q.map_id);
    labels[i] = {q.query_id, q.map_id, q.query_index, strategy,
                 strategy == AssignmentStrategy::Partial
                     ? label_query(ptrs, map, inputs.taxonomy, config_.tau)
                     : full_assignment_variant(ptrs, map, inputs.taxonomy)};
  });

  std::size_t grounded = 0, hints = 0;
  for (const auto& r : labels) {
    for (const auto& a : r.assignments) grounded += a.grounded();
    hints += r.assignments.size();
  }
  const std::size_t n = labels.size();
  write_labels(l, std::move(labels));
  ds.manifest.labels = n;
  stamp(ds.manifest, config_);
  write_manifest(l, ds.manifest);
  return {{"stage", "label"}, {"strategy", strategy_name(strategy)}, {"labels", n}, {"hints", hints},
          {"grounded", grounded}};
}

json Pipeline::localize(Method method) {
  const auto l = layout();
  auto ds = open_dataset(l, config_);
  std::map<int, const MapRecord*> maps;
  for (const auto& rec : ds.maps) maps[rec.map.map_id] = &rec;

  std::vector<LocalizationResult> results(ds.queries.size());
  if (method == Method::Oracle) {
    const auto taxonomy = Taxonomy::load(require_path(config_.paths.taxonomy, "paths.taxonomy"));
    const auto palette = load_palette(config_);
    const OracleContext ctx{taxonomy, palette, config_.query.delta_m};
    parallel_for(ds.queries.size(), options_.jobs, [&](std::size_t i) {
      const auto& q = ds.queries[i];
      const MapRecord& rec = *maps.at(q.map_id);
      results[i] = oracle_localize(q.query_id, rec.map, hint_texts(q), config_.oracle_grid, rec.georef, ctx);
    });
  } else {
    if (!ds.manifest.rendered && !ds.maps.empty()) {
      throw Error(ErrorCode::Integrity, "VLM localization needs rendered maps; run render first");
    }
    const auto system_text = load_system_prompt(require_path(config_.paths.system_prompt, "paths.system_prompt"));
    const VlmClient client(config_.endpoint, system_text, options_.trace);
    const int workers = std::min(options_.jobs, config_.endpoint.max_in_flight);
    parallel_for(ds.queries.size(), workers, [&](std::size_t i) {
      const auto& q = ds.queries[i];
      const MapRecord& rec = *maps.at(q.map_id);
      results[i] = client.localize(q.query_id, *rec.bev, *rec.graph, hint_texts(q));
    });
  }

  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.ok;
  const std::size_t n = results.size();
  write_predictions(l, std::move(results));
  clear_report(l);
  ds.manifest.predictions = n;
  stamp(ds.manifest, config_);
  write_manifest(l, ds.manifest);
  return {{"stage", "localize"}, {"method", method_name(method)}, {"predictions", n}, {"failed", failed}};
}

json Pipeline::evaluate() {
  const auto l = layout();
  const auto ds = read_dataset(l);
  const auto report = t2p::evaluate(ds.queries, ds.predictions, config_.recall_k);
  const auto doc = report_to_json(report);
  write_text_file(l.report_json(), doc.dump(2) + "\n");
  write_text_file(l.report_csv(), report_csv(report));
  write_text_file(l.buckets_csv(), buckets_csv(report));
  return {{"stage", "evaluate"}, {"queries", report.n_queries}, {"recall", doc.at("recall")}};
}

json Pipeline::run_all(Method method) {
  json stages = json::array();
  stages.push_back(build_maps());
  stages.push_back(render());
  stages.push_back(gen_queries());
  stages.push_back(label(AssignmentStrategy::Partial));
  stages.push_back(localize(method));
  stages.push_back(evaluate());
  return {{"stage", "pipeline"}, {"stages", stages}};
}

}  // namespace t2p
