#include "t2ploc/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "t2ploc/codec.hpp"
#include "t2ploc/error.hpp"
#include "t2ploc/model_output.hpp"

namespace t2p {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kPointBytes = 3 * sizeof(double) + 3;

std::string encode_points(const std::vector<ColoredPoint>& points) {
  std::string raw(points.size() * kPointBytes, '\0');
  char* out = raw.data();
  for (const auto& pt : points) {
    const double xyz[3] = {pt.p.x, pt.p.y, pt.p.z};
    std::memcpy(out, xyz, sizeof xyz);
    out[24] = static_cast<char>(pt.c.r);
    out[25] = static_cast<char>(pt.c.g);
    out[26] = static_cast<char>(pt.c.b);
    out += kPointBytes;
  }
  return base64_encode(raw);
}

std::vector<ColoredPoint> decode_points(const std::string& text) {
  const std::string raw = base64_decode(text);
  if (raw.size() % kPointBytes != 0) throw Error(ErrorCode::Parse, "point array has a partial record");
  std::vector<ColoredPoint> points(raw.size() / kPointBytes);
  const char* in = raw.data();
  for (auto& pt : points) {
    double xyz[3];
    std::memcpy(xyz, in, sizeof xyz);
    pt.p = {xyz[0], xyz[1], xyz[2]};
    pt.c = {static_cast<std::uint8_t>(in[24]), static_cast<std::uint8_t>(in[25]),
            static_cast<std::uint8_t>(in[26])};
    in += kPointBytes;
  }
  return points;
}

json vec2(Vec2 v) { return {v.x, v.y}; }
Vec2 vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

template <typename Fn>
auto parse_guard(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, what + ": " + e.what());
  }
}

template <typename T, typename ToJson>
void write_jsonl(const fs::path& path, const std::vector<T>& rows, ToJson&& to_json) {
  std::string text;
  for (const auto& r : rows) {
    text += to_json(r).dump();
    text += '\n';
  }
  write_text_file(path, text);
}

template <typename FromJson>
auto read_jsonl(const fs::path& path, FromJson&& from_json) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Integrity, "missing " + path.string());
  std::vector<decltype(from_json(json()))> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      throw Error(ErrorCode::Parse, path.filename().string() + " line " + std::to_string(lineno) + ": invalid JSON");
    }
    rows.push_back(from_json(doc));
  }
  return rows;
}

}  // namespace

fs::path DatasetLayout::map_dir(int map_id) const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "m%05d", map_id);
  return maps_dir() / buf;
}

json map_to_json(const LocalMap& map, const GeoReference& georef) {
  auto objects = json::array();
  for (const auto& o : map.objects) {
    objects.push_back({{"id", o.id},
                       {"semantic", o.semantic},
                       {"kind", kind_name(o.kind)},
                       {"source_id", o.source_id},
                       {"centroid", vec2(o.centroid)},
                       {"mean_color", {o.mean_color.r, o.mean_color.g, o.mean_color.b}},
                       {"n_points", o.points.size()},
                       {"points", encode_points(o.points)}});
  }
  return {{"map_id", map.map_id},
          {"center", vec2(map.center)},
          {"side_m", map.side_m},
          {"georef",
           {{"center", vec2(georef.center())},
            {"side_m", georef.side_m()},
            {"width_px", georef.width_px()},
            {"height_px", georef.height_px()}}},
          {"objects", objects}};
}

MapRecord map_from_json(const json& doc) {
  return parse_guard("map.json", [&] {
    const auto& g = doc.at("georef");
    MapRecord rec{LocalMap{}, GeoReference(vec2_from(g.at("center")), g.at("side_m").get<double>(),
                                           g.at("width_px").get<int>(), g.at("height_px").get<int>()),
                  std::nullopt, std::nullopt};
    rec.map.map_id = doc.at("map_id").get<int>();
    rec.map.center = vec2_from(doc.at("center"));
    rec.map.side_m = doc.at("side_m").get<double>();
    for (const auto& o : doc.at("objects")) {
      auto obj = ObjectInstance::make(o.at("semantic").get<std::uint16_t>(),
                                      parse_kind(o.at("kind").get<std::string>()),
                                      o.at("source_id").get<std::uint32_t>(),
                                      decode_points(o.at("points").get<std::string>()));
      obj.id = o.at("id").get<int>();
      const auto& mc = o.at("mean_color");
      const ColorRgb stored{mc.at(0).get<std::uint8_t>(), mc.at(1).get<std::uint8_t>(),
                            mc.at(2).get<std::uint8_t>()};
      if (stored != obj.mean_color || vec2_from(o.at("centroid")) != obj.centroid ||
          o.at("n_points").get<std::size_t>() != obj.points.size()) {
        throw Error(ErrorCode::Integrity, "map " + std::to_string(rec.map.map_id) + " object " +
                                              std::to_string(obj.id) + ": cached fields disagree with points");
      }
      rec.map.objects.push_back(std::move(obj));
    }
    return rec;
  });
}

json query_to_json(const Query& q) {
  auto hints = json::array();
  for (const auto& h : q.hints) {
    hints.push_back({{"text", h.text},
                     {"semantic", h.slots.semantic},
                     {"color", h.slots.color},
                     {"direction", direction_word(h.slots.direction)},
                     {"source",
                      {{"cell_object", h.source.cell_object},
                       {"kind", kind_name(h.source.kind)},
                       {"semantic_id", h.source.semantic},
                       {"source_id", h.source.source_id}}}});
  }
  return {{"query_id", q.query_id},
          {"map_id", q.map_id},
          {"query_index", q.query_index},
          {"xi", vec2(q.xi)},
          {"hints", hints},
          {"gt_assignments", assignments_to_json(q.gt_assignments)}};
}

Query query_from_json(const json& doc) {
  return parse_guard("query", [&] {
    Query q;
    q.query_id = doc.at("query_id").get<std::string>();
    q.map_id = doc.at("map_id").get<int>();
    q.query_index = doc.at("query_index").get<int>();
    q.xi = vec2_from(doc.at("xi"));
    for (const auto& h : doc.at("hints")) {
      Hint hint;
      hint.text = h.at("text").get<std::string>();
      hint.slots = {parse_direction(h.at("direction").get<std::string>()), h.at("color").get<std::string>(),
                    h.at("semantic").get<std::string>()};
      const auto& s = h.at("source");
      hint.source = {s.at("cell_object").get<int>(), parse_kind(s.at("kind").get<std::string>()),
                     s.at("semantic_id").get<std::uint16_t>(), s.at("source_id").get<std::uint32_t>()};
      q.hints.push_back(std::move(hint));
    }
    q.gt_assignments = assignments_from_json(doc.at("gt_assignments"));
    return q;
  });
}

json label_to_json(const LabelRecord& r) {
  return {{"query_id", r.query_id},
          {"map_id", r.map_id},
          {"query_index", r.query_index},
          {"strategy", strategy_name(r.strategy)},
          {"assignments", assignments_to_json(r.assignments)}};
}

LabelRecord label_from_json(const json& doc) {
  return parse_guard("label", [&] {
    return LabelRecord{doc.at("query_id").get<std::string>(), doc.at("map_id").get<int>(),
                       doc.at("query_index").get<int>(), parse_strategy(doc.at("strategy").get<std::string>()),
                       assignments_from_json(doc.at("assignments"))};
  });
}

json manifest_to_json(const Manifest& m) {
  return {{"seed", m.seed},
          {"config_hash", m.config_hash},
          {"config", m.config},
          {"rendered", m.rendered},
          {"counts",
           {{"maps", m.maps}, {"queries", m.queries}, {"labels", m.labels}, {"predictions", m.predictions}}}};
}

Manifest manifest_from_json(const json& doc) {
  return parse_guard("manifest.json", [&] {
    Manifest m;
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.config_hash = doc.at("config_hash").get<std::string>();
    m.config = doc.at("config");
    m.rendered = doc.at("rendered").get<bool>();
    const auto& c = doc.at("counts");
    m.maps = c.at("maps").get<std::size_t>();
    m.queries = c.at("queries").get<std::size_t>();
    m.labels = c.at("labels").get<std::size_t>();
    m.predictions = c.at("predictions").get<std::size_t>();
    return m;
  });
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Integrity, "missing " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_map(const DatasetLayout& layout, const MapRecord& record) {
  const int id = record.map.map_id;
  fs::create_directories(layout.map_dir(id));
  write_text_file(layout.map_json(id), map_to_json(record.map, record.georef).dump() + "\n");
  if (record.bev) write_png(layout.bev_png(id), *record.bev);
  if (record.graph) write_text_file(layout.scene_graph_json(id), scene_graph_to_json(*record.graph).dump() + "\n");
}

MapRecord read_map(const DatasetLayout& layout, int map_id, bool rendered) {
  const auto doc = json::parse(read_text_file(layout.map_json(map_id)), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Parse, layout.map_json(map_id).string() + ": invalid JSON");
  MapRecord rec = map_from_json(doc);
  if (rec.map.map_id != map_id) throw Error(ErrorCode::Integrity, "map directory and map_id disagree");
  if (rendered) {
    rec.bev = read_png(layout.bev_png(map_id), rec.georef);
    const auto g = json::parse(read_text_file(layout.scene_graph_json(map_id)), nullptr, false);
    if (g.is_discarded()) throw Error(ErrorCode::Parse, "scene_graph.json: invalid JSON");
    rec.graph = scene_graph_from_json(g);
  }
  return rec;
}

std::vector<int> list_map_ids(const DatasetLayout& layout) {
  std::vector<int> ids;
  if (!fs::exists(layout.maps_dir())) return ids;
  for (const auto& entry : fs::directory_iterator(layout.maps_dir())) {
    const std::string name = entry.path().filename().string();
    int id = 0;
    char tail = 0;
    if (entry.is_directory() && std::sscanf(name.c_str(), "m%d%c", &id, &tail) == 1) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void write_queries(const DatasetLayout& layout, std::vector<Query> queries) {
  std::sort(queries.begin(), queries.end(), [](const Query& a, const Query& b) {
    return std::tie(a.map_id, a.query_index) < std::tie(b.map_id, b.query_index);
  });
  write_jsonl(layout.queries(), queries, query_to_json);
}

std::vector<Query> read_queries(const DatasetLayout& layout) {
  return read_jsonl(layout.queries(), query_from_json);
}

void write_labels(const DatasetLayout& layout, std::vector<LabelRecord> labels) {
  std::sort(labels.begin(), labels.end(), [](const LabelRecord& a, const LabelRecord& b) {
    return std::tie(a.map_id, a.query_index) < std::tie(b.map_id, b.query_index);
  });
  write_jsonl(layout.labels(), labels, label_to_json);
}

std::vector<LabelRecord> read_labels(const DatasetLayout& layout) {
  return read_jsonl(layout.labels(), label_from_json);
}

void write_predictions(const DatasetLayout& layout, std::vector<LocalizationResult> predictions) {
  std::sort(predictions.begin(), predictions.end(),
            [](const LocalizationResult& a, const LocalizationResult& b) { return a.query_id < b.query_id; });
  write_jsonl(layout.predictions(), predictions, result_to_json);
}

std::vector<LocalizationResult> read_predictions(const DatasetLayout& layout) {
  return read_jsonl(layout.predictions(), result_from_json);
}

void write_manifest(const DatasetLayout& layout, const Manifest& manifest) {
  write_text_file(layout.manifest(), manifest_to_json(manifest).dump(2) + "\n");
}

Manifest read_manifest(const DatasetLayout& layout) {
  if (!fs::exists(layout.manifest())) {
    throw Error(ErrorCode::Integrity, "no manifest.json under " + layout.root().string());
  }
  const auto doc = json::parse(read_text_file(layout.manifest()), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Parse, "manifest.json: invalid JSON");
  return manifest_from_json(doc);
}

void write_dataset(const DatasetLayout& layout, Dataset dataset) {
  Manifest& m = dataset.manifest;
  m.maps = dataset.maps.size();
  m.queries = dataset.queries.size();
  m.labels = dataset.labels.size();
  m.predictions = dataset.predictions.size();
  m.rendered = !dataset.maps.empty() && std::all_of(dataset.maps.begin(), dataset.maps.end(), [](const MapRecord& r) {
    return r.bev.has_value() && r.graph.has_value();
  });
  if (fs::exists(layout.maps_dir())) fs::remove_all(layout.maps_dir());
  fs::create_directories(layout.maps_dir());
  for (const auto& rec : dataset.maps) write_map(layout, rec);
  write_queries(layout, dataset.queries);
  write_labels(layout, dataset.labels);
  write_predictions(layout, dataset.predictions);
  write_manifest(layout, m);
}

Dataset read_dataset(const DatasetLayout& layout) {
  Dataset ds;
  ds.manifest = read_manifest(layout);
  const auto ids = list_map_ids(layout);
  if (ids.size() != ds.manifest.maps) {
    throw Error(ErrorCode::Integrity, "manifest lists " + std::to_string(ds.manifest.maps) + " maps, found " +
                                          std::to_string(ids.size()));
  }
  std::set<int> known;
  for (int id : ids) {
    ds.maps.push_back(read_map(layout, id, ds.manifest.rendered));
    known.insert(id);
  }

  auto check_count = [](const char* what, std::size_t expected, std::size_t actual) {
    if (expected != actual) {
      throw Error(ErrorCode::Integrity, std::string("manifest lists ") + std::to_string(expected) + " " + what +
                                            ", found " + std::to_string(actual));
    }
  };
  ds.queries = ds.manifest.queries || fs::exists(layout.queries()) ? read_queries(layout) : std::vector<Query>{};
  check_count("queries", ds.manifest.queries, ds.queries.size());
  std::set<std::string> query_ids;
  for (const auto& q : ds.queries) {
    if (!known.count(q.map_id)) throw Error(ErrorCode::Integrity, q.query_id + " references missing map");
    query_ids.insert(q.query_id);
  }
  ds.labels = ds.manifest.labels || fs::exists(layout.labels()) ? read_labels(layout) : std::vector<LabelRecord>{};
  check_count("labels", ds.manifest.labels, ds.labels.size());
  for (const auto& l : ds.labels) {
    if (!query_ids.count(l.query_id)) throw Error(ErrorCode::Integrity, "label for unknown query " + l.query_id);
  }
  ds.predictions = ds.manifest.predictions || fs::exists(layout.predictions()) ? read_predictions(layout)
                                                                              : std::vector<LocalizationResult>{};
  check_count("predictions", ds.manifest.predictions, ds.predictions.size());
  return ds;
}

}  // namespace t2p
