// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hns/mlp.hpp"

namespace hns {

// Serialized container for the two networks plus the metadata the decoder
// needs. Byte layout (little-endian):
//   magic "HNSC", version u16, flags u16 (bit 0: fp16),
//   q_c header (input_dim u16, H u16, W u16, L u16),
//   q_f header (same), smoothing c u16, lambda f32,
//   normalization scale f32, offset 3xf32,
//   then q_c parameters, then q_f parameters (layer-major, weights row-major
//   then biases, fp16 or fp32 per flags).
struct CompressedModel {
  MlpArchitecture coarse_arch = MlpArchitecture::coarse();
  MlpArchitecture fine_arch = MlpArchitecture::fine(18, 36);
  bool quantized = false;

  std::vector<float> coarse_f32, fine_f32;            // when !quantized
  std::vector<std::uint16_t> coarse_f16, fine_f16;    // when quantized

  std::uint16_t smoothing_iterations = 0;
  float smoothing_lambda = 0.0f;
  float scale = 1.0f;
  std::array<float, 3> offset{};

  Mlp coarse_mlp() const;  // dequantizes when needed
  Mlp fine_mlp() const;

  static constexpr std::size_t header_bytes() { return 46; }
  std::size_t payload_bytes() const;
  std::size_t coarse_payload_bytes() const;
  std::size_t fine_payload_bytes() const;
  std::size_t total_bytes() const { return header_bytes() + payload_bytes(); }
};

constexpr std::uint16_t kContainerVersion = 1;

CompressedModel make_compressed_model(const Mlp& coarse, const Mlp& fine, bool quantize,
                                      int smoothing_iterations, float smoothing_lambda,
                                      float scale, const std::array<float, 3>& offset);

std::vector<std::uint8_t> serialize(const CompressedModel& model);
CompressedModel deserialize(std::span<const std::uint8_t> bytes);

void save_model_file(const CompressedModel& model, const std::string& path);
CompressedModel load_model_file(const std::string& path);

}  // namespace hns
