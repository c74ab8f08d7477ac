#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "support/mock_vlm.hpp"
#include "support/synth.hpp"
#include "t2ploc/config.hpp"
#include "t2ploc/dataset.hpp"
#include "t2ploc/error.hpp"
#include "t2ploc/parallel.hpp"
#include "t2ploc/pipeline.hpp"

using namespace t2p;

namespace {

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected t2p::Error");
  return Error(ErrorCode::InvalidArgument, "");
}

PipelineConfig toy_config(const std::filesystem::path& out) {
  auto c = load_config(synth::data_dir() / "toy" / "config.json");
  c.paths.output = out.string();
  return c;
}

}  // namespace

TEST_CASE("config keys and values") {
  const PipelineConfig defaults;
  SUBCASE("json round trip") {
    auto c = defaults;
    c.query.hints = 5;
    c.tau.stuff_m = 12.5;
    c.cluster_overrides[3] = {1.5, 7};
    c.recall_k = {1, 2};
    c.paths.cloud = "/x/cloud.bin";
    const auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c) != config_hash(defaults));
    CHECK(config_hash(defaults).size() == 64);
  }
  SUBCASE("every documented key can be set from its own value") {
    const auto doc = config_to_json(defaults);
    REQUIRE(config_fields().size() >= 25);
    for (const auto& f : config_fields()) {
      CAPTURE(f.key);
      CHECK_FALSE(f.help.empty());
      const auto ptr = nlohmann::json::json_pointer("/" + [&] {
        std::string k = f.key;
        std::replace(k.begin(), k.end(), '.', '/');
        return k;
      }());
      REQUIRE(doc.contains(ptr));
      auto c = defaults;
      set_config_field(c, f.key, doc.at(ptr));
      CHECK(config_to_json(c) == doc);
    }
  }
  SUBCASE("set_config_field") {
    auto c = defaults;
    set_config_field(c, "query.hints", 3);
    CHECK(c.query.hints == 3);
    set_config_field(c, "pna.tau_object_m", 2.5);
    CHECK(c.tau.object_m == 2.5);
    const auto unknown = error_of([&] { set_config_field(c, "query.hint", 3); });
    CHECK(unknown.code() == ErrorCode::Config);
    CHECK(unknown.field() == "query.hint");
    const auto typed = error_of([&] { set_config_field(c, "query.hints", 2.5); });
    CHECK(typed.code() == ErrorCode::Config);
    CHECK(typed.field() == "query.hints");
    CHECK(error_of([&] { set_config_field(c, "seed", -1); }).field() == "seed");
    CHECK(error_of([&] { set_config_field(c, "query.hints", "six"); }).code() == ErrorCode::Config);
  }
  SUBCASE("unknown keys in a document are named") {
    const auto e = error_of([] { config_from_json(nlohmann::json{{"cluster", {{"epsilon", 2}}}}); });
    CHECK(e.code() == ErrorCode::Config);
    CHECK(e.field() == "cluster.epsilon");
  }
  SUBCASE("validation names the field") {
    auto c = defaults;
    c.side_m = -1;
    CHECK(error_of([&] { c.validate(); }).code() == ErrorCode::Config);
    c = defaults;
    c.query.hints = 0;
    CHECK(error_of([&] { c.validate(); }).field().rfind("query.", 0) == 0);
    c = defaults;
    c.sampling = "random";
    CHECK(error_of([&] { c.validate(); }).field() == "map.sampling");
  }
  SUBCASE("relative paths resolve against the file") {
    const auto c = load_config(synth::data_dir() / "toy" / "config.json");
    CHECK(std::filesystem::path(c.paths.cloud) == synth::data_dir() / "toy" / "cloud.bin");
    CHECK(c.seed == 7);
    CHECK(c.cluster.eps == 2.0);
    CHECK(error_of([] { load_config("/nonexistent/config.json"); }).code() != ErrorCode::InvalidArgument);
  }
}

TEST_CASE("parallel_for") {
  for (int jobs : {1, 2, 8}) {
    std::vector<int> out(1000, 0);
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);
  }
  std::atomic<int> calls{0};
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  CHECK(calls == 0);
  for (int jobs : {1, 4}) {
    try {
      parallel_for(200, jobs, [](std::size_t i) {
        if (i == 37 || i == 150) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}

TEST_CASE("pipeline on the toy fixture") {
  synth::TempDir dir("pipeline");

  SUBCASE("all stages") {
    Pipeline p(toy_config(dir.path() / "a"));
    const auto summary = p.run_all();
    CHECK(summary["stage"] == "pipeline");
    const auto ds = read_dataset(p.layout());
    CHECK(ds.maps.size() >= 2);
    CHECK_FALSE(ds.queries.empty());
    CHECK(ds.labels.size() == ds.queries.size());
    CHECK(ds.predictions.size() == ds.queries.size());
    CHECK(ds.manifest.config_hash == config_hash(p.config()));
    CHECK(ds.manifest.rendered);
    for (const auto& m : ds.maps) {
      CHECK(std::filesystem::exists(p.layout().bev_png(m.map.map_id)));
      CHECK(std::filesystem::exists(p.layout().scene_graph_json(m.map.map_id)));
    }
    const auto report = nlohmann::json::parse(synth::slurp(p.layout().report_json()));
    CHECK(report["n_queries"] == ds.queries.size());
    CHECK(report["recall"].contains("5"));
    CHECK(std::filesystem::exists(p.layout().report_csv()));
    CHECK(std::filesystem::exists(p.layout().buckets_csv()));

    const auto queries = synth::slurp(p.layout().queries());
    const auto labels = synth::slurp(p.layout().labels());
    const auto manifest = synth::slurp(p.layout().manifest());
    p.run_all();
    CHECK(synth::slurp(p.layout().queries()) == queries);
    CHECK(synth::slurp(p.layout().labels()) == labels);
    CHECK(synth::slurp(p.layout().manifest()) == manifest);
  }

  SUBCASE("outputs do not depend on the job count") {
    RunOptions serial;
    RunOptions wide;
    wide.jobs = 8;
    Pipeline a(toy_config(dir.path() / "serial"), serial);
    Pipeline b(toy_config(dir.path() / "wide"), wide);
    a.run_all();
    b.run_all();
    for (auto file : {&DatasetLayout::queries, &DatasetLayout::labels, &DatasetLayout::predictions,
                      &DatasetLayout::report_json}) {
      CHECK(synth::slurp((a.layout().*file)()) == synth::slurp((b.layout().*file)()));
    }
    const auto maps = read_dataset(a.layout()).maps;
    for (const auto& m : maps) {
      CHECK(synth::slurp(a.layout().map_json(m.map.map_id)) == synth::slurp(b.layout().map_json(m.map.map_id)));
      CHECK(synth::slurp(a.layout().bev_png(m.map.map_id)) == synth::slurp(b.layout().bev_png(m.map.map_id)));
    }
  }

  SUBCASE("a different seed changes the queries") {
    auto c = toy_config(dir.path() / "s1");
    Pipeline a(c);
    c.seed = 8;
    c.paths.output = (dir.path() / "s2").string();
    Pipeline b(c);
    a.build_maps();
    a.gen_queries();
    b.build_maps();
    b.gen_queries();
    CHECK(synth::slurp(a.layout().queries()) != synth::slurp(b.layout().queries()));
  }

  SUBCASE("stage preconditions") {
    auto c = toy_config(dir.path() / "pre");
    Pipeline p(c);
    CHECK_THROWS_AS(p.render(), Error);
    p.build_maps();
    p.gen_queries();
    CHECK(error_of([&] { p.localize(Method::Vlm); }).code() == ErrorCode::Integrity);

    c.side_m = 40;
    Pipeline other(c);
    const auto e = error_of([&] { other.gen_queries(); });
    CHECK(e.code() == ErrorCode::Config);
    CHECK(e.field() == "map");
  }

  SUBCASE("missing inputs") {
    auto c = toy_config(dir.path() / "missing");
    c.paths.cloud = (dir.path() / "nope.bin").string();
    const auto e = error_of([&] { Pipeline(c).build_maps(); });
    CHECK(e.code() == ErrorCode::Config);
    CHECK(e.field() == "paths.cloud");
    auto j = toy_config(dir.path() / "jobs");
    RunOptions bad;
    bad.jobs = 0;
    CHECK(error_of([&] { Pipeline(j, bad); }).code() == ErrorCode::Config);
  }

  SUBCASE("full variant grounds at least what the partial labels ground") {
    Pipeline p(toy_config(dir.path() / "full"));
    p.build_maps();
    p.gen_queries();
    p.label(AssignmentStrategy::Partial);
    const auto partial = read_dataset(p.layout()).labels;
    CHECK(p.label(AssignmentStrategy::Full)["strategy"] == "full");
    const auto full = read_dataset(p.layout()).labels;
    REQUIRE(full.size() == partial.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
      CHECK(full[i].strategy == AssignmentStrategy::Full);
      REQUIRE(full[i].assignments.size() == partial[i].assignments.size());
      for (std::size_t h = 0; h < full[i].assignments.size(); ++h) {
        if (partial[i].assignments[h].grounded()) CHECK(full[i].assignments[h].grounded());
      }
    }
  }

  SUBCASE("remote localization through a local endpoint") {
    const auto reply = R"({"assignments": [], "point_2d": [111, 111]})";
    synth::MockVlm mock({{200, "not json"}, {200, reply}});
    auto c = toy_config(dir.path() / "vlm");
    c.endpoint.base_url = mock.base_url();
    c.endpoint.timeout_s = 5;
    c.endpoint.token_env = "T2P_TEST_UNSET_TOKEN";
    RunOptions opts;
    opts.jobs = 3;
    std::atomic<int> traced{0};
    opts.trace = [&](std::string_view) { ++traced; };
    Pipeline p(c, opts);
    p.build_maps();
    p.render();
    p.gen_queries();
    p.label(AssignmentStrategy::Partial);
    const auto s = p.localize(Method::Vlm);
    const auto ds = read_dataset(p.layout());
    CHECK(s["predictions"] == ds.queries.size());
    CHECK(s["failed"] == 0);
    CHECK(mock.request_count() == ds.queries.size() + 1);
    CHECK(traced > 0);
    for (const auto& r : ds.predictions) {
      CHECK(r.ok);
      CHECK(r.method == Method::Vlm);
    }
    CHECK(p.evaluate()["queries"] == ds.queries.size());
  }
}
