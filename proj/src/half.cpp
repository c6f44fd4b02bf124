// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/half.hpp"

#include <cmath>
#include <string>

#include "hns/errors.hpp"

namespace hns {

std::vector<std::uint16_t> quantize_fp16(std::span<const float> params) {
  std::vector<std::uint16_t> out;
  out.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    float v = params[i];
    if (!std::isfinite(v) || half_overflows(v)) {
      throw NumericError("parameter " + std::to_string(i) + " (" + std::to_string(v) +
                         ") is outside the fp16 range");
    }
    out.push_back(float_to_half(v));
  }
  return out;
}

std::vector<float> dequantize_fp16(std::span<const std::uint16_t> packed) {
  std::vector<float> out;
  out.reserve(packed.size());
  for (std::uint16_t h : packed) out.push_back(half_to_float(h));
  return out;
}

}  // namespace hns
