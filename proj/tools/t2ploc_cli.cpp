// Command-line front end. Talks to the toolkit only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "t2ploc/t2ploc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
  t2p_status status;
  std::string message;
  std::string field;
};

void check(t2p_status s) {
  if (s != T2P_OK) throw Failure{s, t2p_last_error_message(), t2p_last_error_field()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  t2p_string_free(s);
  return out;
}

int report(const Failure& f) {
  json err{{"code", t2p_status_name(f.status)}, {"message", f.message}};
  if (!f.field.empty()) err["field"] = f.field;
  std::cerr << json{{"error", err}}.dump() << "\n";
  const bool usage = f.status == T2P_ERR_CONFIG || f.status == T2P_ERR_INVALID_ARGUMENT;
  return usage ? kExitUsage : kExitRuntime;
}

using ConfigPtr = std::unique_ptr<t2p_config, decltype(&t2p_config_free)>;
using PipelinePtr = std::unique_ptr<t2p_pipeline, decltype(&t2p_pipeline_free)>;

std::string default_value(const t2p_config* defaults, const std::string& key) {
  char* out = nullptr;
  check(t2p_config_get(defaults, key.c_str(), &out));
  return take(out);
}

// Turns a command-line value into a JSON literal for `key`: string fields
// take the text verbatim, everything else must already be JSON.
std::string as_json_literal(const t2p_config* defaults, const std::string& key, const std::string& text) {
  const auto current = json::parse(default_value(defaults, key));
  if (current.is_string()) return json(text).dump();
  return text;
}

void trace_to_file(const char* line, void* user) {
  auto* out = static_cast<std::ofstream*>(user);
  *out << line << "\n";
  out->flush();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-point-cloud localization toolkit"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(44);

  std::string config_path;
  int jobs = 1;
  std::string trace_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "pipeline config JSON; flags below override it");
  app.add_option("--jobs", jobs, "worker threads (outputs do not depend on this)")->check(CLI::PositiveNumber);
  app.add_option("--trace", trace_path, "append VLM request/response trace to this file");
  app.add_option("--set", sets, "override any field: --set key=json_value (repeatable)");

  t2p_config* raw_defaults = nullptr;
  if (t2p_config_new(&raw_defaults) != T2P_OK) {
    return report({T2P_ERR_INTERNAL, t2p_last_error_message(), {}});
  }
  ConfigPtr defaults(raw_defaults, t2p_config_free);

  // One flag per config field, e.g. --query.hints 6.
  std::map<std::string, std::optional<std::string>> field_values;
  const auto group = "Config fields (defaults in brackets)";
  for (std::size_t i = 0; i < t2p_config_field_count(); ++i) {
    const char* key = nullptr;
    const char* help = nullptr;
    t2p_config_field(i, &key, &help);
    auto& slot = field_values[key];
    const std::string def = default_value(defaults.get(), key);
    const auto parsed = json::parse(def);
    const char* type = parsed.is_string()          ? "TEXT"
                       : parsed.is_number_integer() ? "INT"
                       : parsed.is_number()         ? "NUM"
                                                    : "JSON";
    app.add_option(std::string("--") + key, slot, std::string(help) + " [" + def + "]")
        ->group(group)
        ->type_name(type);
  }

  std::string mode;
  auto* build = app.add_subcommand("build-maps", "sample map centers and build local maps");
  build->add_option("--mode", mode, "center sampling mode (overrides map.sampling)")
      ->check(CLI::IsMember({"trajectory", "grid"}));
  auto* render = app.add_subcommand("render", "render BEV rasters and scene graphs");
  auto* gen = app.add_subcommand("gen-queries", "sample query locations and generate hinted queries");
  std::string strategy = "partial";
  auto* label = app.add_subcommand("label", "compute node assignments for every query");
  label->add_option("--strategy", strategy, "assignment strategy")->check(CLI::IsMember({"partial", "full"}));
  std::string method = "oracle";
  auto* localize = app.add_subcommand("localize", "localize every query");
  localize->add_option("--method", method, "localizer")->check(CLI::IsMember({"oracle", "vlm"}));
  auto* evaluate = app.add_subcommand("evaluate", "score predictions and write reports");
  std::string pipeline_method = "oracle";
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  pipeline->add_option("--method", pipeline_method, "localizer")->check(CLI::IsMember({"oracle", "vlm"}));
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({T2P_ERR_INVALID_ARGUMENT, e.what(), {}});
  }

  std::ofstream trace_file;
  try {
    t2p_config* raw = nullptr;
    if (config_path.empty()) {
      check(t2p_config_new(&raw));
    } else {
      check(t2p_config_load(config_path.c_str(), &raw));
    }
    ConfigPtr config(raw, t2p_config_free);
    for (const auto& [key, value] : field_values) {
      if (!value) continue;
      check(t2p_config_set(config.get(), key.c_str(), as_json_literal(defaults.get(), key, *value).c_str()));
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw Failure{T2P_ERR_INVALID_ARGUMENT, "--set expects key=value: " + s, {}};
      const auto key = s.substr(0, eq);
      std::string literal;
      {
        char* probe = nullptr;
        check(t2p_config_get(config.get(), key.c_str(), &probe));
        const auto current = json::parse(take(probe));
        literal = current.is_string() ? json(s.substr(eq + 1)).dump() : s.substr(eq + 1);
      }
      check(t2p_config_set(config.get(), key.c_str(), literal.c_str()));
    }

    t2p_trace_fn trace = nullptr;
    if (!trace_path.empty()) {
      trace_file.open(trace_path, std::ios::app);
      if (!trace_file) throw Failure{T2P_ERR_IO, "cannot open trace file " + trace_path, {}};
      trace = trace_to_file;
    }
    t2p_pipeline* raw_pipeline = nullptr;
    check(t2p_pipeline_new(config.get(), jobs, trace, &trace_file, &raw_pipeline));
    PipelinePtr p(raw_pipeline, t2p_pipeline_free);

    char* summary = nullptr;
    if (build->parsed()) {
      check(t2p_build_maps(p.get(), mode.empty() ? nullptr : mode.c_str(), &summary));
    } else if (render->parsed()) {
      check(t2p_render(p.get(), &summary));
    } else if (gen->parsed()) {
      check(t2p_gen_queries(p.get(), &summary));
    } else if (label->parsed()) {
      check(t2p_label(p.get(), strategy.c_str(), &summary));
    } else if (localize->parsed()) {
      check(t2p_localize(p.get(), method.c_str(), &summary));
    } else if (evaluate->parsed()) {
      check(t2p_evaluate(p.get(), &summary));
    } else if (pipeline->parsed()) {
      check(t2p_run_pipeline(p.get(), pipeline_method.c_str(), &summary));
    }
    std::cout << take(summary) << "\n";
    return kExitOk;
  } catch (const Failure& f) {
    return report(f);
  } catch (const json::exception& e) {
    return report({T2P_ERR_INVALID_ARGUMENT, e.what(), {}});
  }
}
