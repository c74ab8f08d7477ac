#include "t2ploc/t2ploc.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "t2ploc/config.hpp"
#include "t2ploc/dataset.hpp"
#include "t2ploc/error.hpp"
#include "t2ploc/eval.hpp"
#include "t2ploc/model_output.hpp"
#include "t2ploc/pipeline.hpp"

struct t2p_config {
  t2p::PipelineConfig value;
};

struct t2p_pipeline {
  std::unique_ptr<t2p::Pipeline> value;
};

struct t2p_dataset {
  t2p::Dataset value;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_field;

void clear_error() {
  g_message.clear();
  g_field.clear();
}

t2p_status fail(t2p_status status, std::string message, std::string field = {}) {
  g_message = std::move(message);
  g_field = std::move(field);
  return status;
}

// Runs fn, mapping exceptions onto status codes and the last-error slots.
template <class Fn>
t2p_status guarded(Fn&& fn) noexcept {
  clear_error();
  try {
    fn();
    return T2P_OK;
  } catch (const t2p::Error& e) {
    return fail(static_cast<t2p_status>(e.code()), e.what(), e.field());
  } catch (const nlohmann::json::exception& e) {
    return fail(T2P_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(T2P_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(T2P_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(T2P_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

void require(bool ok, const char* what) {
  if (!ok) throw t2p::Error(t2p::ErrorCode::InvalidArgument, what);
}

t2p::GeoReference georef_of(const t2p_georef* g) {
  require(g != nullptr, "georef is null");
  return t2p::GeoReference({g->center_x, g->center_y}, g->side_m, g->width_px, g->height_px);
}

t2p::Pipeline& pipeline_of(t2p_pipeline* p) {
  require(p != nullptr && p->value != nullptr, "pipeline is null");
  return *p->value;
}

}  // namespace

extern "C" {

const char* t2p_version(void) { return "0.1.0"; }

const char* t2p_status_name(t2p_status status) {
  if (status == T2P_OK) return "ok";
  if (status == T2P_ERR_INTERNAL) return "internal_error";
  if (status >= T2P_ERR_INVALID_ARGUMENT && status <= T2P_ERR_UNDEFINED_METRIC) {
    return t2p::error_code_name(static_cast<t2p::ErrorCode>(status));
  }
  return "unknown_status";
}

const char* t2p_last_error_message(void) { return g_message.c_str(); }
const char* t2p_last_error_field(void) { return g_field.c_str(); }

void t2p_string_free(char* s) { std::free(s); }

t2p_status t2p_config_new(t2p_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new t2p_config{};
  });
}

t2p_status t2p_config_load(const char* path, t2p_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out are required");
    *out = new t2p_config{t2p::load_config(path)};
  });
}

void t2p_config_free(t2p_config* config) { delete config; }

t2p_status t2p_config_set(t2p_config* config, const char* key, const char* value_json) {
  return guarded([&] {
    require(config && key && value_json, "config, key and value are required");
    const auto value = nlohmann::json::parse(value_json, nullptr, false);
    if (value.is_discarded()) {
      throw t2p::Error(t2p::ErrorCode::Config, std::string(key) + ": value is not a JSON literal", key);
    }
    t2p::set_config_field(config->value, key, value);
  });
}

t2p_status t2p_config_get(const t2p_config* config, const char* key, char** out_json) {
  return guarded([&] {
    require(config && key && out_json, "config, key and out are required");
    const auto doc = t2p::config_to_json(config->value);
    const nlohmann::json::json_pointer ptr("/" + [&] {
      std::string k(key);
      for (auto& c : k) {
        if (c == '.') c = '/';
      }
      return k;
    }());
    if (!doc.contains(ptr)) throw t2p::Error(t2p::ErrorCode::Config, std::string("unknown config key '") + key + "'", key);
    emit(out_json, doc.at(ptr).dump());
  });
}

t2p_status t2p_config_dump(const t2p_config* config, char** out_json) {
  return guarded([&] {
    require(config && out_json, "config and out are required");
    emit(out_json, t2p::config_to_json(config->value).dump(2));
  });
}

t2p_status t2p_config_hash(const t2p_config* config, char** out_hex) {
  return guarded([&] {
    require(config && out_hex, "config and out are required");
    emit(out_hex, t2p::config_hash(config->value));
  });
}

size_t t2p_config_field_count(void) { return t2p::config_fields().size(); }

t2p_status t2p_config_field(size_t index, const char** key, const char** help) {
  return guarded([&] {
    const auto& fields = t2p::config_fields();
    if (index >= fields.size()) throw t2p::Error(t2p::ErrorCode::Range, "field index out of range");
    if (key) *key = fields[index].key.c_str();
    if (help) *help = fields[index].help.c_str();
  });
}

t2p_status t2p_pipeline_new(const t2p_config* config, int jobs, t2p_trace_fn trace, void* trace_user,
                            t2p_pipeline** out) {
  return guarded([&] {
    require(config && out, "config and out are required");
    t2p::RunOptions options;
    options.jobs = jobs;
    if (trace) {
      options.trace = [trace, trace_user](std::string_view line) {
        const std::string s(line);
        trace(s.c_str(), trace_user);
      };
    }
    *out = new t2p_pipeline{std::make_unique<t2p::Pipeline>(config->value, std::move(options))};
  });
}

void t2p_pipeline_free(t2p_pipeline* pipeline) { delete pipeline; }

t2p_status t2p_build_maps(t2p_pipeline* pipeline, const char* sampling, char** out_summary) {
  return guarded([&] {
    auto& p = pipeline_of(pipeline);
    const auto summary = sampling ? p.build_maps(std::string(sampling)) : p.build_maps();
    emit(out_summary, summary.dump());
  });
}

t2p_status t2p_render(t2p_pipeline* pipeline, char** out_summary) {
  return guarded([&] { emit(out_summary, pipeline_of(pipeline).render().dump()); });
}

t2p_status t2p_gen_queries(t2p_pipeline* pipeline, char** out_summary) {
  return guarded([&] { emit(out_summary, pipeline_of(pipeline).gen_queries().dump()); });
}

t2p_status t2p_label(t2p_pipeline* pipeline, const char* strategy, char** out_summary) {
  return guarded([&] {
    require(strategy != nullptr, "strategy is null");
    emit(out_summary, pipeline_of(pipeline).label(t2p::parse_strategy(strategy)).dump());
  });
}

t2p_status t2p_localize(t2p_pipeline* pipeline, const char* method, char** out_summary) {
  return guarded([&] {
    require(method != nullptr, "method is null");
    emit(out_summary, pipeline_of(pipeline).localize(t2p::parse_method(method)).dump());
  });
}

t2p_status t2p_evaluate(t2p_pipeline* pipeline, char** out_summary) {
  return guarded([&] { emit(out_summary, pipeline_of(pipeline).evaluate().dump()); });
}

t2p_status t2p_run_pipeline(t2p_pipeline* pipeline, const char* method, char** out_summary) {
  return guarded([&] {
    const auto m = method ? t2p::parse_method(method) : t2p::Method::Oracle;
    emit(out_summary, pipeline_of(pipeline).run_all(m).dump());
  });
}

t2p_status t2p_dataset_open(const char* root, t2p_dataset** out) {
  return guarded([&] {
    require(root && out, "root and out are required");
    *out = new t2p_dataset{t2p::read_dataset(t2p::DatasetLayout(root))};
  });
}

void t2p_dataset_free(t2p_dataset* dataset) { delete dataset; }

t2p_status t2p_dataset_manifest(const t2p_dataset* dataset, char** out_json) {
  return guarded([&] {
    require(dataset && out_json, "dataset and out are required");
    emit(out_json, t2p::manifest_to_json(dataset->value.manifest).dump());
  });
}

size_t t2p_dataset_map_count(const t2p_dataset* dataset) { return dataset ? dataset->value.maps.size() : 0; }

size_t t2p_dataset_query_count(const t2p_dataset* dataset) { return dataset ? dataset->value.queries.size() : 0; }

t2p_status t2p_dataset_query(const t2p_dataset* dataset, size_t index, char** out_json) {
  return guarded([&] {
    require(dataset && out_json, "dataset and out are required");
    if (index >= dataset->value.queries.size()) throw t2p::Error(t2p::ErrorCode::Range, "query index out of range");
    emit(out_json, t2p::query_to_json(dataset->value.queries[index]).dump());
  });
}

t2p_status t2p_world_to_pixel(const t2p_georef* georef, double x, double y, int* u, int* v, int* in_window) {
  return guarded([&] {
    require(u && v, "u and v are required");
    const auto proj = t2p::world_to_pixel({x, y}, georef_of(georef));
    *u = proj.pixel.u;
    *v = proj.pixel.v;
    if (in_window) *in_window = proj.in_window ? 1 : 0;
  });
}

t2p_status t2p_pixel_to_world(const t2p_georef* georef, int u, int v, double* x, double* y) {
  return guarded([&] {
    require(x && y, "x and y are required");
    const auto p = t2p::pixel_to_world({u, v}, georef_of(georef));
    *x = p.x;
    *y = p.y;
  });
}

t2p_status t2p_parse_model_output(const t2p_georef* georef, const char* text, char** out_json) {
  return guarded([&] {
    require(text && out_json, "text and out are required");
    emit(out_json, t2p::serialize_prediction(t2p::parse_model_output(text, georef_of(georef))));
  });
}

t2p_status t2p_recall_at(const double* errors, size_t count, double k, double* out) {
  return guarded([&] {
    require(out != nullptr && (errors != nullptr || count == 0), "errors and out are required");
    *out = t2p::recall_at(std::span<const double>(errors, count), k);
  });
}

}  // extern "C"
