/* C interface to the t2ploc toolkit.
 *
 * Every fallible call returns a t2p_status. On failure the calling thread's
 * last-error slots hold a message and, for configuration errors, the dotted
 * config key at fault. Strings returned through char** are owned by the
 * caller and released with t2p_string_free. */
#ifndef T2PLOC_T2PLOC_H
#define T2PLOC_T2PLOC_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(T2P_BUILDING_LIBRARY)
#define T2P_API __declspec(dllexport)
#else
#define T2P_API __declspec(dllimport)
#endif
#else
#define T2P_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum t2p_status {
  T2P_OK = 0,
  T2P_ERR_INVALID_ARGUMENT = 1,
  T2P_ERR_PARSE = 2,
  T2P_ERR_TAXONOMY = 3,
  T2P_ERR_EMPTY_OBJECT = 4,
  T2P_ERR_EMPTY_TRAJECTORY = 5,
  T2P_ERR_EMPTY_GRAPH = 6,
  T2P_ERR_RANGE = 7,
  T2P_ERR_INTEGRITY = 8,
  T2P_ERR_CONFIG = 9,
  T2P_ERR_IO = 10,
  T2P_ERR_NO_JSON = 11,
  T2P_ERR_SCHEMA = 12,
  T2P_ERR_OUT_OF_RASTER = 13,
  T2P_ERR_TRANSPORT = 14,
  T2P_ERR_AUTH = 15,
  T2P_ERR_UNDEFINED_METRIC = 16,
  T2P_ERR_INTERNAL = 99
} t2p_status;

typedef struct t2p_config t2p_config;
typedef struct t2p_pipeline t2p_pipeline;
typedef struct t2p_dataset t2p_dataset;

typedef void (*t2p_trace_fn)(const char* line, void* user);

typedef struct t2p_georef {
  double center_x;
  double center_y;
  double side_m;
  int width_px;
  int height_px;
} t2p_georef;

T2P_API const char* t2p_version(void);
/* Stable snake_case name, e.g. "config_error". */
T2P_API const char* t2p_status_name(t2p_status status);
/* Empty string when the last call on this thread succeeded. */
T2P_API const char* t2p_last_error_message(void);
T2P_API const char* t2p_last_error_field(void);
T2P_API void t2p_string_free(char* s);

/* Configuration: defaults, JSON file, dotted-key overrides. */
T2P_API t2p_status t2p_config_new(t2p_config** out);
T2P_API t2p_status t2p_config_load(const char* path, t2p_config** out);
T2P_API void t2p_config_free(t2p_config* config);
/* value_json is a JSON literal: "6", "\"grid\"", "[5,10]". */
T2P_API t2p_status t2p_config_set(t2p_config* config, const char* key, const char* value_json);
T2P_API t2p_status t2p_config_get(const t2p_config* config, const char* key, char** out_json);
T2P_API t2p_status t2p_config_dump(const t2p_config* config, char** out_json);
T2P_API t2p_status t2p_config_hash(const t2p_config* config, char** out_hex);
T2P_API size_t t2p_config_field_count(void);
/* Key and help text of field i; static storage. */
T2P_API t2p_status t2p_config_field(size_t index, const char** key, const char** help);

/* Pipeline stages over config's paths.output. Each writes a JSON summary
 * to *out_summary when it is not NULL. */
T2P_API t2p_status t2p_pipeline_new(const t2p_config* config, int jobs, t2p_trace_fn trace, void* trace_user,
                                    t2p_pipeline** out);
T2P_API void t2p_pipeline_free(t2p_pipeline* pipeline);
/* sampling: "trajectory", "grid", or NULL for the configured mode. */
T2P_API t2p_status t2p_build_maps(t2p_pipeline* pipeline, const char* sampling, char** out_summary);
T2P_API t2p_status t2p_render(t2p_pipeline* pipeline, char** out_summary);
T2P_API t2p_status t2p_gen_queries(t2p_pipeline* pipeline, char** out_summary);
/* strategy: "partial" or "full". */
T2P_API t2p_status t2p_label(t2p_pipeline* pipeline, const char* strategy, char** out_summary);
/* method: "oracle" or "vlm". */
T2P_API t2p_status t2p_localize(t2p_pipeline* pipeline, const char* method, char** out_summary);
T2P_API t2p_status t2p_evaluate(t2p_pipeline* pipeline, char** out_summary);
T2P_API t2p_status t2p_run_pipeline(t2p_pipeline* pipeline, const char* method, char** out_summary);

/* Read-only, integrity-checked view of a dataset directory. */
T2P_API t2p_status t2p_dataset_open(const char* root, t2p_dataset** out);
T2P_API void t2p_dataset_free(t2p_dataset* dataset);
T2P_API t2p_status t2p_dataset_manifest(const t2p_dataset* dataset, char** out_json);
T2P_API size_t t2p_dataset_map_count(const t2p_dataset* dataset);
T2P_API size_t t2p_dataset_query_count(const t2p_dataset* dataset);
/* One queries.jsonl record. */
T2P_API t2p_status t2p_dataset_query(const t2p_dataset* dataset, size_t index, char** out_json);

/* Primitives. */
T2P_API t2p_status t2p_world_to_pixel(const t2p_georef* georef, double x, double y, int* u, int* v,
                                      int* in_window);
T2P_API t2p_status t2p_pixel_to_world(const t2p_georef* georef, int u, int v, double* x, double* y);
/* Normalized prediction JSON {"assignments": [...], "point_2d": [u, v]}. */
T2P_API t2p_status t2p_parse_model_output(const t2p_georef* georef, const char* text, char** out_json);
T2P_API t2p_status t2p_recall_at(const double* errors, size_t count, double k, double* out);

#ifdef __cplusplus
}
#endif

#endif
