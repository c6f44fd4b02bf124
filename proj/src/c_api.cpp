// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns.h"

#include <cstring>
#include <exception>
#include <string>

#include "hns/decoder.hpp"
#include "hns/errors.hpp"
#include "hns/mesh_io.hpp"
#include "hns/metrics.hpp"
#include "hns/trainer.hpp"

struct hns_mesh {
  hns::TriangleMesh mesh;
};

struct hns_model {
  hns::CompressedModel model;
};

namespace {

thread_local std::string t_last_error;

hns_status set_error(hns_status status, const char* what) {
  t_last_error = what ? what : "unknown error";
  return status;
}

hns_status status_from(const hns::Error& e) {
  switch (e.status()) {
    case hns::Status::Ok: return HNS_OK;
    case hns::Status::Io: return HNS_ERROR_IO;
    case hns::Status::Parse: return HNS_ERROR_PARSE;
    case hns::Status::Topology: return HNS_ERROR_TOPOLOGY;
    case hns::Status::Parameterization: return HNS_ERROR_PARAMETERIZATION;
    case hns::Status::Training: return HNS_ERROR_TRAINING;
    case hns::Status::Format: return HNS_ERROR_FORMAT;
    case hns::Status::Numeric: return HNS_ERROR_NUMERIC;
    case hns::Status::InvalidArgument: return HNS_ERROR_INVALID_ARGUMENT;
    case hns::Status::Internal: return HNS_ERROR_INTERNAL;
  }
  return HNS_ERROR_INTERNAL;
}

template <typename Fn>
hns_status guarded(Fn&& fn) {
  try {
    fn();
    return HNS_OK;
  } catch (const hns::Error& e) {
    return set_error(status_from(e), e.what());
  } catch (const std::exception& e) {
    return set_error(HNS_ERROR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HNS_ERROR_INTERNAL, "unknown failure");
  }
}

}  // namespace

extern "C" {

const char* hns_version(void) { return "0.1.0"; }

const char* hns_last_error(void) { return t_last_error.c_str(); }

hns_status hns_mesh_load(const char* path, hns_mesh** out_mesh) {
  if (!path || !out_mesh) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* wrapper = new hns_mesh{hns::load_mesh_file(path)};
    *out_mesh = wrapper;
  });
}

hns_status hns_mesh_save(const hns_mesh* mesh, const char* path) {
  if (!mesh || !path) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { hns::save_mesh_file(mesh->mesh, path); });
}

void hns_mesh_free(hns_mesh* mesh) { delete mesh; }

uint64_t hns_mesh_vertex_count(const hns_mesh* mesh) {
  return mesh ? mesh->mesh.vertices.size() : 0;
}

uint64_t hns_mesh_face_count(const hns_mesh* mesh) { return mesh ? mesh->mesh.faces.size() : 0; }

hns_status hns_mesh_validate(const hns_mesh* mesh, hns_topology_report* out_report) {
  if (!mesh || !out_report) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    hns::TopologyReport r = hns::validate_topology(mesh->mesh);
    out_report->is_watertight = r.is_watertight ? 1 : 0;
    out_report->orientation_consistent = r.orientation_consistent ? 1 : 0;
    out_report->euler_characteristic = r.euler_characteristic;
    out_report->genus = r.genus;
    out_report->boundary_edge_count = r.boundary_edge_count;
  });
}

void hns_encode_config_init(hns_encode_config* config) {
  if (!config) return;
  hns::TrainConfig defaults;
  std::memset(config, 0, sizeof(*config));
  config->coarse_iterations = defaults.coarse_iterations;
  config->fine_iterations = defaults.fine_iterations;
  config->batch_size = defaults.batch_size;
  config->base_lr = defaults.base_lr;
  config->seed = defaults.seed;
  config->preset = "50KB";
  config->custom_fine_layers = defaults.custom_fine_layers;
  config->custom_fine_width = defaults.custom_fine_width;
  config->positional_levels = defaults.positional_levels;
  config->table_level = defaults.table_level;
  config->table_weight_by_area = defaults.table_weight_by_area ? 1 : 0;
  config->fine_sampling_uniform = 0;
  config->smoothing_iterations = defaults.smoothing_iterations;
  config->smoothing_lambda = defaults.smoothing_lambda;
  config->quantize = defaults.quantize ? 1 : 0;
  config->workers = defaults.workers;
  config->adam_beta1 = defaults.adamw.beta1;
  config->adam_beta2 = defaults.adamw.beta2;
  config->adam_epsilon = defaults.adamw.epsilon;
  config->adam_weight_decay = defaults.adamw.weight_decay;
  config->parameterize_max_iterations = defaults.parameterize.max_iterations;
  config->parameterize_step_size = defaults.parameterize.step_size;
  config->parameterize_tolerance = defaults.parameterize.tolerance;
}

hns_status hns_encode(const hns_mesh* mesh, const hns_encode_config* config,
                      const hns_mesh* imported_sphere, hns_progress_fn progress, void* user_data,
                      hns_encode_stats* out_stats, hns_model** out_model) {
  if (!mesh || !config || !out_model) {
    return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    hns::TrainConfig train;
    train.coarse_iterations = config->coarse_iterations;
    train.fine_iterations = config->fine_iterations;
    train.batch_size = config->batch_size;
    train.base_lr = config->base_lr;
    train.seed = config->seed;
    train.preset = hns::preset_from_name(config->preset ? config->preset : "50KB");
    train.custom_fine_layers = config->custom_fine_layers;
    train.custom_fine_width = config->custom_fine_width;
    train.positional_levels = config->positional_levels;
    train.table_level = config->table_level;
    train.table_weight_by_area = config->table_weight_by_area != 0;
    train.fine_sampling = config->fine_sampling_uniform
                              ? hns::FineSampling::UniformSphere
                              : hns::FineSampling::DistortionTable;
    train.smoothing_iterations = config->smoothing_iterations;
    train.smoothing_lambda = config->smoothing_lambda;
    train.quantize = config->quantize != 0;
    train.workers = config->workers;
    train.adamw = {config->adam_beta1, config->adam_beta2, config->adam_epsilon,
                   config->adam_weight_decay};
    train.parameterize = {config->parameterize_max_iterations, config->parameterize_step_size,
                          config->parameterize_tolerance};

    hns::ProgressFn fn;
    if (progress) {
      fn = [progress, user_data](const hns::TrainProgress& p) {
        progress(p.stage, p.iteration, p.total, p.loss, p.lr, user_data);
      };
    }
    hns::EncodeResult result =
        hns::encode(mesh->mesh, train, imported_sphere ? &imported_sphere->mesh : nullptr, fn);
    if (out_stats) {
      out_stats->final_coarse_loss = result.final_coarse_loss;
      out_stats->final_fine_loss = result.final_fine_loss;
      out_stats->parameterize_seconds = result.parameterize_seconds;
      out_stats->coarse_seconds = result.coarse_seconds;
      out_stats->table_seconds = result.table_seconds;
      out_stats->fine_seconds = result.fine_seconds;
      out_stats->used_imported_sphere = result.used_imported_sphere ? 1 : 0;
    }
    *out_model = new hns_model{std::move(result.model)};
  });
}

hns_status hns_model_save(const hns_model* model, const char* path) {
  if (!model || !path) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { hns::save_model_file(model->model, path); });
}

hns_status hns_model_load(const char* path, hns_model** out_model) {
  if (!path || !out_model) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out_model = new hns_model{hns::load_model_file(path)}; });
}

void hns_model_free(hns_model* model) { delete model; }

hns_status hns_model_get_info(const hns_model* model, hns_model_info* out_info) {
  if (!model || !out_info) return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const hns::CompressedModel& m = model->model;
    out_info->quantized = m.quantized ? 1 : 0;
    out_info->coarse_hidden_layers = m.coarse_arch.hidden_layers;
    out_info->coarse_hidden_width = m.coarse_arch.hidden_width;
    out_info->coarse_input_dim = m.coarse_arch.input_dim;
    out_info->coarse_positional_levels = m.coarse_arch.positional_levels;
    out_info->fine_hidden_layers = m.fine_arch.hidden_layers;
    out_info->fine_hidden_width = m.fine_arch.hidden_width;
    out_info->fine_input_dim = m.fine_arch.input_dim;
    out_info->fine_positional_levels = m.fine_arch.positional_levels;
    out_info->coarse_parameter_count = m.coarse_arch.parameter_count();
    out_info->fine_parameter_count = m.fine_arch.parameter_count();
    out_info->header_bytes = hns::CompressedModel::header_bytes();
    out_info->coarse_payload_bytes = m.coarse_payload_bytes();
    out_info->fine_payload_bytes = m.fine_payload_bytes();
    out_info->total_bytes = m.total_bytes();
    out_info->smoothing_iterations = m.smoothing_iterations;
    out_info->smoothing_lambda = m.smoothing_lambda;
    out_info->scale = m.scale;
    out_info->offset[0] = m.offset[0];
    out_info->offset[1] = m.offset[1];
    out_info->offset[2] = m.offset[2];
  });
}

void hns_decode_options_init(hns_decode_options* options) {
  if (!options) return;
  hns::DecodeOptions defaults;
  options->level = defaults.level;
  options->adaptive = defaults.adaptive ? 1 : 0;
  options->ratio_threshold = defaults.ratio_threshold;
  options->max_rounds = defaults.max_rounds;
  options->apply_displacement = defaults.apply_displacement ? 1 : 0;
  options->workers = defaults.workers;
}

hns_status hns_decode(const hns_model* model, const hns_decode_options* options,
                      hns_mesh** out_mesh) {
  if (!model || !options || !out_mesh) {
    return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    hns::DecodeOptions opts;
    opts.level = options->level;
    opts.adaptive = options->adaptive != 0;
    opts.ratio_threshold = options->ratio_threshold;
    opts.max_rounds = options->max_rounds;
    opts.apply_displacement = options->apply_displacement != 0;
    opts.workers = options->workers;
    *out_mesh = new hns_mesh{hns::decode(model->model, opts)};
  });
}

hns_status hns_eval(const hns_mesh* recon, const hns_mesh* reference, uint64_t n, uint64_t seed,
                    int32_t direction, int32_t normalize, double* out_d_pm,
                    double* out_d_n_degrees) {
  if (!recon || !reference || !out_d_pm || !out_d_n_degrees) {
    return set_error(HNS_ERROR_INVALID_ARGUMENT, "null argument");
  }
  if (direction < 0 || direction > 2) {
    return set_error(HNS_ERROR_INVALID_ARGUMENT, "direction must be 0, 1, or 2");
  }
  return guarded([&] {
    hns::MetricDirection dir = direction == 0 ? hns::MetricDirection::SourceToReference
                               : direction == 1 ? hns::MetricDirection::ReferenceToSource
                                                : hns::MetricDirection::Symmetric;
    hns::MetricsReport report;
    if (normalize) {
      hns::NormalizeResult ref_norm = hns::normalize_mesh(reference->mesh);
      hns::TriangleMesh recon_norm = recon->mesh;
      for (hns::Vec3& v : recon_norm.vertices) {
        v = (v - ref_norm.offset) / ref_norm.scale;
      }
      report = hns::evaluate_metrics(recon_norm, ref_norm.mesh, n, seed, dir);
    } else {
      report = hns::evaluate_metrics(recon->mesh, reference->mesh, n, seed, dir);
    }
    *out_d_pm = report.d_pm_mean;
    *out_d_n_degrees = report.d_n_mean_degrees;
  });
}

}  // extern "C"
