#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/synth.hpp"
#include "t2ploc/bev.hpp"
#include "t2ploc/cloud_index.hpp"
#include "t2ploc/codec.hpp"
#include "t2ploc/dataset.hpp"
#include "t2ploc/error.hpp"
#include "t2ploc/map_builder.hpp"
#include "t2ploc/oracle.hpp"
#include "t2ploc/query_gen.hpp"
#include "t2ploc/scene_graph.hpp"
#include "t2ploc/trajectory.hpp"

using namespace t2p;
namespace fs = std::filesystem;

namespace {

template <class Fn>
Error error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected t2p::Error");
  return Error(ErrorCode::InvalidArgument, "");
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Two rendered maps with queries, labels and oracle predictions.
Dataset small_dataset(const Taxonomy& taxonomy, const InstancePointCloud& cloud, const ColorPalette& palette) {
  const CloudIndex index(cloud, taxonomy);
  MapBuildConfig build;
  build.cluster = {3.0, 4};
  Dataset ds;
  for (Vec2 c : {Vec2{0, 0}, Vec2{20, 5}}) {
    auto map = build_local_map(index, c, build);
    REQUIRE_FALSE(map.empty());
    map.map_id = static_cast<int>(ds.maps.size());
    const auto g = GeoReference::square(c, 50.0, 224);
    MapRecord rec{map, g, render_bev(map, g), build_scene_graph(map, g, taxonomy)};
    ds.maps.push_back(rec);
  }
  const QueryContext ctx{index, palette, build, QueryConfig{}, TauConfig{}};
  const OracleContext octx{taxonomy, palette};
  for (const auto& rec : ds.maps) {
    for (int q = 0; q < 3; ++q) {
      Rng rng(derive_seed(1, {static_cast<std::uint64_t>(rec.map.map_id), static_cast<std::uint64_t>(q)}));
      const Vec2 xi{rec.map.center.x + rng.uniform(-10, 10), rec.map.center.y + rng.uniform(-10, 10)};
      auto query = generate_query(rec.map, ctx, xi, q, rng);
      REQUIRE(query);
      ds.labels.push_back({query->query_id, query->map_id, q, AssignmentStrategy::Partial, query->gt_assignments});
      std::vector<std::string> texts;
      for (const auto& h : query->hints) texts.push_back(h.text);
      ds.predictions.push_back(oracle_localize(query->query_id, rec.map, texts, GridConfig{2.0}, rec.georef, octx));
      ds.queries.push_back(std::move(*query));
    }
  }
  ds.manifest.seed = 1;
  ds.manifest.config_hash = "abc";
  ds.manifest.config = {{"note", "test"}};
  return ds;
}

}  // namespace

TEST_CASE("text point cloud") {
  const auto tax = synth::taxonomy();
  std::istringstream ok("# x y z r g b sem inst\n1 2 3 10 20 30 10 5\n4 5 6 0 0 0 1 0\n\n7 8 9 1 1 1 12 9\n");
  const auto cloud = parse_point_cloud_text(ok, tax);
  REQUIRE(cloud.points.size() == 3);
  CHECK(cloud.points[0] == synth::ip(1, 2, 3, {10, 20, 30}, 10, 5));
  CHECK(cloud.points[2].instance == 9);

  std::istringstream six("1 2 3 4 5 6 10 1\n1 2 3 4 5 6\n");
  const auto e = error_of([&] { parse_point_cloud_text(six, tax); });
  CHECK(e.code() == ErrorCode::Parse);
  CHECK(std::string(e.what()).find("2") != std::string::npos);

  std::istringstream unknown("1 2 3 4 5 6 999 1\n");
  CHECK(error_of([&] { parse_point_cloud_text(unknown, tax); }).code() == ErrorCode::Taxonomy);

  std::istringstream bad_color("1 2 3 4 5 600 10 1\n");
  CHECK(error_of([&] { parse_point_cloud_text(bad_color, tax); }).code() == ErrorCode::Parse);
}

TEST_CASE("binary point cloud round trip") {
  synth::TempDir dir("cloud");
  const auto tax = synth::taxonomy();
  Rng rng(2);
  const auto cloud = synth::random_cloud(rng, {}, synth::shipped_palette());
  const auto path = dir.path() / "c.bin";
  write_point_cloud(path, cloud);
  CHECK(fs::file_size(path) == kCloudHeaderBytes + kCloudRecordBytes * cloud.points.size());
  const auto back = load_point_cloud(path, tax);
  REQUIRE(back.points.size() == cloud.points.size());
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& a = cloud.points[i];
    const auto& b = back.points[i];
    REQUIRE(b.p.x == static_cast<float>(a.p.x));
    REQUIRE(b.p.y == static_cast<float>(a.p.y));
    REQUIRE(b.c == a.c);
    REQUIRE(b.semantic == a.semantic);
    REQUIRE(b.instance == a.instance);
  }

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  write_file(dir.path() / "short.bin", bytes.substr(0, bytes.size() - 5));
  CHECK(error_of([&] { load_point_cloud(dir.path() / "short.bin", tax); }).code() == ErrorCode::Parse);

  auto patched = bytes;
  patched[kCloudHeaderBytes + 15] = static_cast<char>(0xE7);
  patched[kCloudHeaderBytes + 16] = 0x03;  // semantic 999
  write_file(dir.path() / "bad_label.bin", patched);
  CHECK(error_of([&] { load_point_cloud(dir.path() / "bad_label.bin", tax); }).code() == ErrorCode::Taxonomy);

  CHECK_THROWS_AS(load_point_cloud(dir.path() / "missing.bin", tax), Error);
}

TEST_CASE("trajectory parsing") {
  std::istringstream two("0 0\n# comment\n3.5 -2\n");
  const auto t = parse_trajectory(two);
  REQUIRE(t.poses.size() == 2);
  CHECK(t.poses[1] == Vec2{3.5, -2});

  std::istringstream empty("\n# nothing\n");
  CHECK(error_of([&] { parse_trajectory(empty); }).code() == ErrorCode::EmptyTrajectory);
  std::istringstream bad("1 2\n1 x\n");
  CHECK(error_of([&] { parse_trajectory(bad); }).code() == ErrorCode::Parse);
  std::istringstream three("1 2 3\n");
  CHECK(error_of([&] { parse_trajectory(three); }).code() == ErrorCode::Parse);

  std::stringstream big;
  for (int i = 0; i < 10000; ++i) big << i << " " << -i << "\n";
  const auto long_t = parse_trajectory(big);
  REQUIRE(long_t.poses.size() == 10000);
  CHECK(long_t.poses.front() == Vec2{0, 0});
  CHECK(long_t.poses.back() == Vec2{9999, -9999});
}

TEST_CASE("codec") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("foob") == "Zm9vYg==");
  CHECK(base64_decode("Zm9vYmFy") == "foobar");
  CHECK(base64_decode("Zm9vYg==") == "foob");
  Rng rng(1);
  for (int n = 0; n < 64; ++n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>(rng.below(256)));
    REQUIRE(base64_decode(base64_encode(s)) == s);
  }
  CHECK_THROWS_AS(base64_decode("Zm9v!"), Error);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("dataset round trip") {
  const auto tax = synth::taxonomy();
  const auto palette = synth::shipped_palette();
  Rng rng(21);
  synth::SceneSpec spec;
  spec.center = {10, 0};
  spec.half_extent = 30;
  spec.objects = 24;
  const auto cloud = synth::random_cloud(rng, spec, palette);
  const auto ds = small_dataset(tax, cloud, palette);

  synth::TempDir dir("ds");
  const DatasetLayout layout(dir.path());
  write_dataset(layout, ds);
  auto back = read_dataset(layout);
  CHECK(back.manifest.maps == 2);
  CHECK(back.manifest.queries == 6);
  CHECK(back.manifest.rendered);
  CHECK(back.maps == ds.maps);
  CHECK(back.queries == ds.queries);
  CHECK(back.labels == ds.labels);
  CHECK(back.predictions == ds.predictions);

  // Rewriting what was read gives identical bytes.
  synth::TempDir again("ds2");
  write_dataset(DatasetLayout(again.path()), back);
  for (const auto* name : {"queries.jsonl", "labels.jsonl", "predictions.jsonl", "manifest.json"}) {
    CHECK(read_text_file(dir.path() / name) == read_text_file(again.path() / name));
  }
  CHECK(read_text_file(layout.map_json(1)) == read_text_file(DatasetLayout(again.path()).map_json(1)));

  SUBCASE("missing bev.png") {
    fs::remove(layout.bev_png(1));
    CHECK(error_of([&] { read_dataset(layout); }).code() == ErrorCode::Integrity);
  }
  SUBCASE("count drift") {
    auto m = read_manifest(layout);
    m.queries += 1;
    write_manifest(layout, m);
    CHECK(error_of([&] { read_dataset(layout); }).code() == ErrorCode::Integrity);
  }
  SUBCASE("dangling map id") {
    auto qs = read_queries(layout);
    qs[0].map_id = 7;
    write_queries(layout, qs);
    CHECK(error_of([&] { read_dataset(layout); }).code() == ErrorCode::Integrity);
  }
  SUBCASE("tampered cached centroid") {
    auto doc = nlohmann::json::parse(read_text_file(layout.map_json(0)));
    doc["objects"][0]["centroid"][0] = 1e6;
    write_text_file(layout.map_json(0), doc.dump());
    CHECK(error_of([&] { read_dataset(layout); }).code() == ErrorCode::Integrity);
  }
  SUBCASE("missing manifest") {
    fs::remove(layout.manifest());
    CHECK(error_of([&] { read_dataset(layout); }).code() == ErrorCode::Integrity);
  }
}

TEST_CASE("jsonl order is map id then query index") {
  const auto tax = synth::taxonomy();
  const auto palette = synth::shipped_palette();
  Rng rng(4);
  synth::SceneSpec spec;
  spec.center = {10, 0};
  spec.half_extent = 30;
  spec.objects = 24;
  auto ds = small_dataset(tax, synth::random_cloud(rng, spec, palette), palette);
  std::reverse(ds.queries.begin(), ds.queries.end());
  synth::TempDir dir("order");
  const DatasetLayout layout(dir.path());
  write_dataset(layout, ds);
  const auto qs = read_queries(layout);
  for (std::size_t i = 1; i < qs.size(); ++i) {
    CHECK(std::tie(qs[i - 1].map_id, qs[i - 1].query_index) < std::tie(qs[i].map_id, qs[i].query_index));
  }
}
