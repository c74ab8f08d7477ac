#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/t2ploc.h"

namespace fs = std::filesystem;

namespace {

const fs::path kToy = fs::path(T2P_TEST_DATA_DIR) / "toy";

struct Scratch {
  fs::path root = fs::temp_directory_path() / ("t2p_capi_" + std::to_string(::getpid()));
  Scratch() {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  t2p_string_free(s);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string("\"") + T2P_CLI_PATH + "\" " + args + " 2>\"" + err_file.string() + "\"";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_file);
  return r;
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::strlen(t2p_version()) > 0);
  CHECK(std::string(t2p_status_name(T2P_OK)) == "ok");
  CHECK(std::string(t2p_status_name(T2P_ERR_CONFIG)) == "config_error");
  CHECK(std::string(t2p_status_name(T2P_ERR_OUT_OF_RASTER)) == "malformed_output_out_of_raster");

  t2p_config* cfg = nullptr;
  REQUIRE(t2p_config_new(&cfg) == T2P_OK);
  CHECK(t2p_config_set(cfg, "query.hintz", "3") == T2P_ERR_CONFIG);
  CHECK(std::string(t2p_last_error_field()) == "query.hintz");
  CHECK(std::strlen(t2p_last_error_message()) > 0);
  CHECK(t2p_config_set(cfg, "query.hints", "{not json") == T2P_ERR_CONFIG);
  CHECK(std::string(t2p_last_error_field()) == "query.hints");
  CHECK(t2p_config_set(nullptr, "query.hints", "3") == T2P_ERR_INVALID_ARGUMENT);
  t2p_config_free(cfg);
  t2p_config_free(nullptr);
}

TEST_CASE("config handle") {
  t2p_config* cfg = nullptr;
  REQUIRE(t2p_config_new(&cfg) == T2P_OK);
  char* s = nullptr;
  REQUIRE(t2p_config_get(cfg, "query.hints", &s) == T2P_OK);
  CHECK(take(s) == "6");
  REQUIRE(t2p_config_hash(cfg, &s) == T2P_OK);
  const auto before = take(s);
  CHECK(before.size() == 64);
  REQUIRE(t2p_config_set(cfg, "query.hints", "4") == T2P_OK);
  REQUIRE(t2p_config_get(cfg, "query.hints", &s) == T2P_OK);
  CHECK(take(s) == "4");
  REQUIRE(t2p_config_hash(cfg, &s) == T2P_OK);
  CHECK(take(s) != before);
  REQUIRE(t2p_config_dump(cfg, &s) == T2P_OK);
  CHECK(nlohmann::json::parse(take(s))["query"]["hints"] == 4);
  CHECK(t2p_config_get(cfg, "nope", &s) == T2P_ERR_CONFIG);
  t2p_config_free(cfg);

  const std::size_t n = t2p_config_field_count();
  CHECK(n >= 25);
  const char* key = nullptr;
  const char* help = nullptr;
  REQUIRE(t2p_config_field(0, &key, &help) == T2P_OK);
  CHECK(std::strchr(key, '.') != nullptr);
  CHECK(t2p_config_field(n, &key, &help) == T2P_ERR_RANGE);
}

TEST_CASE("primitives") {
  const t2p_georef g{0, 0, 50, 224, 224};
  int u = 0, v = 0, in = 0;
  REQUIRE(t2p_world_to_pixel(&g, 0, 0, &u, &v, &in) == T2P_OK);
  CHECK(u == 111);
  CHECK(v == 111);
  CHECK(in == 1);
  REQUIRE(t2p_world_to_pixel(&g, 100, 0, &u, &v, &in) == T2P_OK);
  CHECK(in == 0);
  double x = 0, y = 0;
  REQUIRE(t2p_pixel_to_world(&g, 111, 111, &x, &y) == T2P_OK);
  CHECK(x == doctest::Approx(-25.0 + 111.5 * 50.0 / 224).epsilon(1e-12));
  CHECK(y == doctest::Approx(25.0 - 111.5 * 50.0 / 224).epsilon(1e-12));
  CHECK(t2p_pixel_to_world(&g, 224, 0, &x, &y) == T2P_ERR_RANGE);

  char* s = nullptr;
  REQUIRE(t2p_parse_model_output(&g, "ok: {\"assignments\": [], \"point_2d\": [5, 6]}", &s) == T2P_OK);
  CHECK(nlohmann::json::parse(take(s))["point_2d"] == nlohmann::json::array({5, 6}));
  CHECK(t2p_parse_model_output(&g, "nothing", &s) == T2P_ERR_NO_JSON);
  CHECK(t2p_parse_model_output(&g, "{\"assignments\": [], \"point_2d\": [500, 6]}", &s) == T2P_ERR_OUT_OF_RASTER);

  const double errors[] = {3, 7, 20};
  double r = 0;
  REQUIRE(t2p_recall_at(errors, 3, 10, &r) == T2P_OK);
  CHECK(r == doctest::Approx(2.0 / 3));
  CHECK(t2p_recall_at(errors, 0, 10, &r) == T2P_ERR_UNDEFINED_METRIC);
}

TEST_CASE("pipeline through the C API") {
  Scratch scratch;
  t2p_config* cfg = nullptr;
  REQUIRE(t2p_config_load((kToy / "config.json").c_str(), &cfg) == T2P_OK);
  const auto out = (scratch.root / "ds").string();
  REQUIRE(t2p_config_set(cfg, "paths.output", nlohmann::json(out).dump().c_str()) == T2P_OK);

  t2p_pipeline* p = nullptr;
  CHECK(t2p_pipeline_new(cfg, 0, nullptr, nullptr, &p) == T2P_ERR_CONFIG);
  REQUIRE(t2p_pipeline_new(cfg, 2, nullptr, nullptr, &p) == T2P_OK);
  char* s = nullptr;
  CHECK(t2p_render(p, &s) != T2P_OK);
  REQUIRE(t2p_build_maps(p, nullptr, &s) == T2P_OK);
  CHECK(nlohmann::json::parse(take(s))["stage"] == "build-maps");
  REQUIRE(t2p_render(p, &s) == T2P_OK);
  take(s);
  REQUIRE(t2p_gen_queries(p, &s) == T2P_OK);
  take(s);
  CHECK(t2p_label(p, "sideways", &s) == T2P_ERR_INVALID_ARGUMENT);
  REQUIRE(t2p_label(p, "partial", &s) == T2P_OK);
  take(s);
  REQUIRE(t2p_localize(p, "oracle", &s) == T2P_OK);
  take(s);
  REQUIRE(t2p_evaluate(p, &s) == T2P_OK);
  CHECK(nlohmann::json::parse(take(s))["recall"].contains("10"));
  t2p_pipeline_free(p);
  t2p_config_free(cfg);

  t2p_dataset* ds = nullptr;
  REQUIRE(t2p_dataset_open(out.c_str(), &ds) == T2P_OK);
  CHECK(t2p_dataset_map_count(ds) >= 2);
  const std::size_t nq = t2p_dataset_query_count(ds);
  REQUIRE(nq > 0);
  REQUIRE(t2p_dataset_query(ds, 0, &s) == T2P_OK);
  const auto q = nlohmann::json::parse(take(s));
  CHECK(q["hints"].size() == 6);
  CHECK(t2p_dataset_query(ds, nq, &s) == T2P_ERR_RANGE);
  REQUIRE(t2p_dataset_manifest(ds, &s) == T2P_OK);
  CHECK(nlohmann::json::parse(take(s))["counts"]["queries"] == nq);
  t2p_dataset_free(ds);
  CHECK(t2p_dataset_open((scratch.root / "missing").c_str(), &ds) != T2P_OK);
}

TEST_CASE("command-line tool") {
  Scratch scratch;
  const auto err = scratch.root / "stderr.txt";
  const std::string config = "--config \"" + (kToy / "config.json").string() + "\"";

  SUBCASE("full pipeline") {
    const auto out = scratch.root / "run1";
    const auto r = run_cli(config + " --jobs 4 --paths.output \"" + out.string() + "\" pipeline", err);
    CHECK(r.exit_code == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["stage"] == "pipeline");
    for (const char* f : {"manifest.json", "queries.jsonl", "labels.jsonl", "predictions.jsonl", "report.json",
                          "report.csv", "buckets.csv"}) {
      CHECK(fs::exists(out / f));
    }
    const auto again = scratch.root / "run2";
    REQUIRE(run_cli(config + " --paths.output \"" + again.string() + "\" pipeline", err).exit_code == 0);
    CHECK(slurp(out / "queries.jsonl") == slurp(again / "queries.jsonl"));
    CHECK(slurp(out / "report.json") == slurp(again / "report.json"));
  }
  SUBCASE("stages one by one with overrides") {
    const auto out = scratch.root / "stages";
    const std::string base = config + " --paths.output \"" + out.string() + "\" --set query.hints=4";
    REQUIRE(run_cli(base + " build-maps --mode trajectory", err).exit_code == 0);
    REQUIRE(run_cli(base + " render", err).exit_code == 0);
    REQUIRE(run_cli(base + " gen-queries", err).exit_code == 0);
    REQUIRE(run_cli(base + " label --strategy full", err).exit_code == 0);
    REQUIRE(run_cli(base + " localize --method oracle", err).exit_code == 0);
    const auto r = run_cli(base + " evaluate", err);
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out)["stage"] == "evaluate");
    std::ifstream q(out / "queries.jsonl");
    std::string line;
    REQUIRE(std::getline(q, line));
    CHECK(nlohmann::json::parse(line)["hints"].size() == 4);
  }
  SUBCASE("missing cloud") {
    const auto r = run_cli(config + " --paths.cloud /nonexistent/cloud.bin --paths.output \"" +
                               (scratch.root / "x").string() + "\" build-maps",
                           err);
    CHECK(r.exit_code == 2);
    const auto doc = nlohmann::json::parse(r.err);
    CHECK(doc["error"]["code"] == "config_error");
    CHECK(doc["error"]["field"] == "paths.cloud");
  }
  SUBCASE("bad override") {
    const auto r = run_cli(config + " --set query.nope=1 build-maps", err);
    CHECK(r.exit_code == 2);
    CHECK(nlohmann::json::parse(r.err)["error"]["field"] == "query.nope");
  }
  SUBCASE("help lists every field with its default") {
    const auto r = run_cli("--help", err);
    CHECK(r.exit_code == 0);
    for (std::size_t i = 0; i < t2p_config_field_count(); ++i) {
      const char* key = nullptr;
      const char* help = nullptr;
      REQUIRE(t2p_config_field(i, &key, &help) == T2P_OK);
      CAPTURE(key);
      CHECK(r.out.find(std::string("--") + key) != std::string::npos);
    }
    CHECK(r.out.find("[6]") != std::string::npos);
  }
}
