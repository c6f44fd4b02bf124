// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "hns/container.hpp"
#include "hns/distortion.hpp"
#include "hns/mlp.hpp"
#include "hns/spherical_param.hpp"

namespace hns {

enum class SizePreset { k50KB, k85KB, k165KB, k260KB, kCustom };

struct PresetSpec {
  const char* name;
  int fine_hidden_layers;
  int fine_hidden_width;
};

PresetSpec preset_spec(SizePreset preset);
SizePreset preset_from_name(const std::string& name);  // throws on unknown names

// How fine-stage batches pick sphere points. DistortionTable is the
// production path; UniformSphere exists for ablation comparisons.
enum class FineSampling { DistortionTable, UniformSphere };

struct TrainConfig {
  int coarse_iterations = 50000;
  int fine_iterations = 15000;
  int batch_size = 2048;
  double base_lr = 1e-3;
  std::uint64_t seed = 0;

  SizePreset preset = SizePreset::k50KB;
  int custom_fine_layers = 18;   // used when preset == kCustom
  int custom_fine_width = 36;
  int positional_levels = 10;

  int table_level = 5;
  bool table_weight_by_area = false;
  FineSampling fine_sampling = FineSampling::DistortionTable;

  int smoothing_iterations = 30;
  double smoothing_lambda = 0.5;
  bool quantize = true;
  int workers = 0;  // 0 = hardware concurrency

  AdamWParams adamw;
  ParameterizeOptions parameterize;

  MlpArchitecture fine_architecture() const;
  void validate() const;
};

struct TrainProgress {
  const char* stage;  // "parameterize", "coarse", "table", "fine"
  int iteration = 0;
  int total = 0;
  double loss = 0.0;
  double lr = 0.0;
};

using ProgressFn = std::function<void(const TrainProgress&)>;

// Fits q_c to the coarse surface: uniform area samples on M_s, re-normalized
// to the unit sphere, regressed onto the matching coarse-mesh points.
Mlp train_coarse(const ParameterizedShape& shape, const TrainConfig& config,
                 const ProgressFn& progress = nullptr);

// Fits q_f to the displacement field. Batch points come from the distortion
// table (or uniform directions under FineSampling::UniformSphere); q_c stays
// frozen.
Mlp train_fine(const ParameterizedShape& shape, const Mlp& coarse_net,
               const DistortionTable* table, const SphereLocator& locator,
               const TrainConfig& config, const ProgressFn& progress = nullptr);

struct EncodeResult {
  CompressedModel model;
  double final_coarse_loss = 0.0;
  double final_fine_loss = 0.0;
  double parameterize_seconds = 0.0;
  double coarse_seconds = 0.0;
  double table_seconds = 0.0;
  double fine_seconds = 0.0;
  bool used_imported_sphere = false;
};

// Full encode: normalize, parameterize (or adopt the imported sphere), smooth,
// train both networks, assemble the container. Stage failures are rethrown
// with the stage name.
EncodeResult encode(const TriangleMesh& input, const TrainConfig& config,
                    const TriangleMesh* imported_sphere = nullptr,
                    const ProgressFn& progress = nullptr);

}  // namespace hns
