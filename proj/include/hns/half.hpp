// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace hns {

// IEEE 754 binary16 conversion with round-to-nearest-even. No hardware
// half support is assumed.
inline std::uint16_t float_to_half(float value) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
  std::uint32_t exp = (bits >> 23) & 0xFFu;
  std::uint32_t mant = bits & 0x7FFFFFu;

  if (exp == 0xFFu) {  // inf / nan
    std::uint16_t payload = mant ? static_cast<std::uint16_t>(0x0200u | (mant >> 13)) : 0u;
    return static_cast<std::uint16_t>(sign | 0x7C00u | payload);
  }

  int e = static_cast<int>(exp) - 127 + 15;
  if (e >= 31) return static_cast<std::uint16_t>(sign | 0x7C00u);  // overflow -> inf
  if (e <= 0) {
    if (e < -10) return sign;  // below half the smallest subnormal -> zero
    std::uint32_t m = mant | 0x800000u;
    int shift = 14 - e;  // 14..24
    std::uint32_t half_mant = m >> shift;
    std::uint32_t rem = m & ((1u << shift) - 1u);
    std::uint32_t halfway = 1u << (shift - 1);
    if (rem > halfway || (rem == halfway && (half_mant & 1u))) ++half_mant;
    return static_cast<std::uint16_t>(sign | half_mant);
  }

  std::uint16_t h = static_cast<std::uint16_t>(sign | (e << 10) | (mant >> 13));
  std::uint32_t rem = mant & 0x1FFFu;
  // carry from the increment may roll the mantissa into the next exponent,
  // which is the correct rounding behavior (and may produce inf)
  if (rem > 0x1000u || (rem == 0x1000u && (h & 1u))) ++h;
  return h;
}

inline float half_to_float(std::uint16_t h) {
  std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
  std::uint32_t exp = (h >> 10) & 0x1Fu;
  std::uint32_t mant = h & 0x3FFu;
  std::uint32_t bits;
  if (exp == 0x1Fu) {
    bits = sign | 0x7F800000u | (mant << 13);
  } else if (exp != 0) {
    bits = sign | ((exp + 112u) << 23) | (mant << 13);
  } else if (mant == 0) {
    bits = sign;
  } else {
    int shift = 0;
    while (!(mant & 0x400u)) {
      mant <<= 1;
      ++shift;
    }
    mant &= 0x3FFu;
    bits = sign | (static_cast<std::uint32_t>(113 - shift) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

inline bool half_overflows(float value) {
  std::uint16_t h = float_to_half(value);
  return (h & 0x7C00u) == 0x7C00u;  // rounded to inf (or was nan)
}

// Throws NumericError naming the offending index if a value is not
// representable in the fp16 range.
std::vector<std::uint16_t> quantize_fp16(std::span<const float> params);
std::vector<float> dequantize_fp16(std::span<const std::uint16_t> packed);

}  // namespace hns
