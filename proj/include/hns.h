/* Copyright 2026 The hnsc Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the hierarchical neural surface codec. All functions return
 * hns_status; on failure hns_last_error() carries a message for the calling
 * thread. Objects are opaque handles released with the matching _free call.
 */

#ifndef HNS_H_
#define HNS_H_

#include <stdint.h>

#if defined(_WIN32)
#define HNS_API __declspec(dllexport)
#else
#define HNS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hns_status {
  HNS_OK = 0,
  HNS_ERROR_IO = 1,
  HNS_ERROR_PARSE = 2,
  HNS_ERROR_TOPOLOGY = 3,
  HNS_ERROR_PARAMETERIZATION = 4,
  HNS_ERROR_TRAINING = 5,
  HNS_ERROR_FORMAT = 6,
  HNS_ERROR_NUMERIC = 7,
  HNS_ERROR_INVALID_ARGUMENT = 8,
  HNS_ERROR_INTERNAL = 9
} hns_status;

typedef struct hns_mesh hns_mesh;
typedef struct hns_model hns_model;

HNS_API const char* hns_version(void);

/* Message for the most recent failure on this thread. */
HNS_API const char* hns_last_error(void);

/* ---- meshes (OBJ / PLY by file extension) ---- */

HNS_API hns_status hns_mesh_load(const char* path, hns_mesh** out_mesh);
HNS_API hns_status hns_mesh_save(const hns_mesh* mesh, const char* path);
HNS_API void hns_mesh_free(hns_mesh* mesh);
HNS_API uint64_t hns_mesh_vertex_count(const hns_mesh* mesh);
HNS_API uint64_t hns_mesh_face_count(const hns_mesh* mesh);

typedef struct hns_topology_report {
  int32_t is_watertight;
  int32_t orientation_consistent;
  int64_t euler_characteristic;
  int64_t genus; /* -1 when not watertight */
  uint64_t boundary_edge_count;
} hns_topology_report;

HNS_API hns_status hns_mesh_validate(const hns_mesh* mesh, hns_topology_report* out_report);

/* ---- encoding ---- */

typedef struct hns_encode_config {
  int32_t coarse_iterations;
  int32_t fine_iterations;
  int32_t batch_size;
  double base_lr;
  uint64_t seed;
  const char* preset; /* "50KB" | "85KB" | "165KB" | "260KB" | "custom" */
  int32_t custom_fine_layers;
  int32_t custom_fine_width;
  int32_t positional_levels;
  int32_t table_level;
  int32_t table_weight_by_area;
  int32_t fine_sampling_uniform; /* nonzero: ablation mode, skip the table */
  int32_t smoothing_iterations;
  double smoothing_lambda;
  int32_t quantize;
  int32_t workers; /* 0 = hardware concurrency */
  double adam_beta1;
  double adam_beta2;
  double adam_epsilon;
  double adam_weight_decay;
  int32_t parameterize_max_iterations;
  double parameterize_step_size;
  double parameterize_tolerance;
} hns_encode_config;

/* Fills `config` with defaults (50KB preset, 50000/15000 iterations, batch
 * 2048, lr 1e-3, fp16 quantization on). */
HNS_API void hns_encode_config_init(hns_encode_config* config);

typedef void (*hns_progress_fn)(const char* stage, int32_t iteration, int32_t total, double loss,
                                double lr, void* user_data);

typedef struct hns_encode_stats {
  double final_coarse_loss;
  double final_fine_loss;
  double parameterize_seconds;
  double coarse_seconds;
  double table_seconds;
  double fine_seconds;
  int32_t used_imported_sphere;
} hns_encode_stats;

/* `imported_sphere` (optional) supplies a precomputed spherical embedding with
 * identical connectivity instead of the built-in parameterizer. */
HNS_API hns_status hns_encode(const hns_mesh* mesh, const hns_encode_config* config,
                              const hns_mesh* imported_sphere, hns_progress_fn progress,
                              void* user_data, hns_encode_stats* out_stats,
                              hns_model** out_model);

/* ---- models ---- */

HNS_API hns_status hns_model_save(const hns_model* model, const char* path);
HNS_API hns_status hns_model_load(const char* path, hns_model** out_model);
HNS_API void hns_model_free(hns_model* model);

typedef struct hns_model_info {
  int32_t quantized;
  int32_t coarse_hidden_layers;
  int32_t coarse_hidden_width;
  int32_t coarse_input_dim;
  int32_t coarse_positional_levels;
  int32_t fine_hidden_layers;
  int32_t fine_hidden_width;
  int32_t fine_input_dim;
  int32_t fine_positional_levels;
  uint64_t coarse_parameter_count;
  uint64_t fine_parameter_count;
  uint64_t header_bytes;
  uint64_t coarse_payload_bytes;
  uint64_t fine_payload_bytes;
  uint64_t total_bytes;
  int32_t smoothing_iterations;
  double smoothing_lambda;
  double scale;
  double offset[3];
} hns_model_info;

HNS_API hns_status hns_model_get_info(const hns_model* model, hns_model_info* out_info);

/* ---- decoding ---- */

typedef struct hns_decode_options {
  int32_t level;
  int32_t adaptive;
  double ratio_threshold;
  int32_t max_rounds;
  int32_t apply_displacement; /* 0: coarse-only reconstruction */
  int32_t workers;
} hns_decode_options;

/* level 6, adaptive on, threshold 4, 3 rounds, displacement on. */
HNS_API void hns_decode_options_init(hns_decode_options* options);

HNS_API hns_status hns_decode(const hns_model* model, const hns_decode_options* options,
                              hns_mesh** out_mesh);

/* ---- metrics ----
 * direction: 0 recon->reference, 1 reference->recon, 2 symmetric.
 * normalize: nonzero maps both meshes by the reference's unit-bounding-box-
 * diagonal transform before sampling, making d_pm scale-independent. */
HNS_API hns_status hns_eval(const hns_mesh* recon, const hns_mesh* reference, uint64_t n,
                            uint64_t seed, int32_t direction, int32_t normalize, double* out_d_pm,
                            double* out_d_n_degrees);

#ifdef __cplusplus
}
#endif

#endif /* HNS_H_ */
