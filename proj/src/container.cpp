// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/container.hpp"

#include <cstring>
#include <fstream>

#include "hns/errors.hpp"
#include "hns/half.hpp"

namespace hns {

Mlp CompressedModel::coarse_mlp() const {
  if (quantized) {
    std::vector<float> params = dequantize_fp16(coarse_f16);
    return Mlp::from_parameters(coarse_arch, params);
  }
  return Mlp::from_parameters(coarse_arch, coarse_f32);
}

Mlp CompressedModel::fine_mlp() const {
  if (quantized) {
    std::vector<float> params = dequantize_fp16(fine_f16);
    return Mlp::from_parameters(fine_arch, params);
  }
  return Mlp::from_parameters(fine_arch, fine_f32);
}

std::size_t CompressedModel::coarse_payload_bytes() const {
  return coarse_arch.parameter_count() * (quantized ? 2 : 4);
}

std::size_t CompressedModel::fine_payload_bytes() const {
  return fine_arch.parameter_count() * (quantized ? 2 : 4);
}

std::size_t CompressedModel::payload_bytes() const {
  return coarse_payload_bytes() + fine_payload_bytes();
}

CompressedModel make_compressed_model(const Mlp& coarse, const Mlp& fine, bool quantize,
                                      int smoothing_iterations, float smoothing_lambda,
                                      float scale, const std::array<float, 3>& offset) {
  CompressedModel model;
  model.coarse_arch = coarse.architecture();
  model.fine_arch = fine.architecture();
  model.quantized = quantize;
  model.smoothing_iterations = static_cast<std::uint16_t>(smoothing_iterations);
  model.smoothing_lambda = smoothing_lambda;
  model.scale = scale;
  model.offset = offset;
  std::vector<float> coarse_params = coarse.flatten();
  std::vector<float> fine_params = fine.flatten();
  if (quantize) {
    model.coarse_f16 = quantize_fp16(coarse_params);
    model.fine_f16 = quantize_fp16(fine_params);
  } else {
    model.coarse_f32 = std::move(coarse_params);
    model.fine_f32 = std::move(fine_params);
  }
  return model;
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFF));
}

struct Cursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) {
      throw FormatError("truncation: container ends at byte " + std::to_string(bytes.size()) +
                        " but " + std::to_string(pos + n) + " are needed");
    }
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  }
  float f32() {
    need(4);
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

void put_arch(std::vector<std::uint8_t>& out, const MlpArchitecture& arch) {
  put_u16(out, static_cast<std::uint16_t>(arch.input_dim));
  put_u16(out, static_cast<std::uint16_t>(arch.hidden_layers));
  put_u16(out, static_cast<std::uint16_t>(arch.hidden_width));
  put_u16(out, static_cast<std::uint16_t>(arch.positional_levels));
}

MlpArchitecture read_arch(Cursor& c, const char* which) {
  MlpArchitecture arch;
  arch.input_dim = c.u16();
  arch.hidden_layers = c.u16();
  arch.hidden_width = c.u16();
  arch.positional_levels = c.u16();
  arch.output_dim = 3;
  try {
    arch.validate();
  } catch (const Error& e) {
    throw FormatError(std::string(which) + " header is invalid: " + e.what());
  }
  return arch;
}

}  // namespace

std::vector<std::uint8_t> serialize(const CompressedModel& model) {
  std::vector<std::uint8_t> out;
  out.reserve(model.total_bytes());
  out.insert(out.end(), {'H', 'N', 'S', 'C'});
  put_u16(out, kContainerVersion);
  put_u16(out, model.quantized ? 1 : 0);
  put_arch(out, model.coarse_arch);
  put_arch(out, model.fine_arch);
  put_u16(out, model.smoothing_iterations);
  put_f32(out, model.smoothing_lambda);
  put_f32(out, model.scale);
  for (float v : model.offset) put_f32(out, v);

  if (model.quantized) {
    if (model.coarse_f16.size() != model.coarse_arch.parameter_count() ||
        model.fine_f16.size() != model.fine_arch.parameter_count()) {
      throw FormatError("quantized parameter blob size does not match the architecture");
    }
    for (std::uint16_t h : model.coarse_f16) put_u16(out, h);
    for (std::uint16_t h : model.fine_f16) put_u16(out, h);
  } else {
    if (model.coarse_f32.size() != model.coarse_arch.parameter_count() ||
        model.fine_f32.size() != model.fine_arch.parameter_count()) {
      throw FormatError("parameter blob size does not match the architecture");
    }
    for (float v : model.coarse_f32) put_f32(out, v);
    for (float v : model.fine_f32) put_f32(out, v);
  }
  return out;
}

CompressedModel deserialize(std::span<const std::uint8_t> bytes) {
  Cursor c{bytes};
  c.need(4);
  if (std::memcmp(bytes.data(), "HNSC", 4) != 0) {
    throw FormatError("bad magic: not an HNSC container");
  }
  c.pos = 4;
  std::uint16_t version = c.u16();
  if (version != kContainerVersion) {
    throw FormatError("unsupported version " + std::to_string(version) + " (expected " +
                      std::to_string(kContainerVersion) + ")");
  }
  std::uint16_t flags = c.u16();
  CompressedModel model;
  model.quantized = (flags & 1u) != 0;
  model.coarse_arch = read_arch(c, "q_c");
  model.fine_arch = read_arch(c, "q_f");
  model.smoothing_iterations = c.u16();
  model.smoothing_lambda = c.f32();
  model.scale = c.f32();
  for (float& v : model.offset) v = c.f32();

  std::size_t expected = model.total_bytes();
  if (bytes.size() != expected) {
    throw FormatError("truncation: header declares " + std::to_string(expected) +
                      " bytes, file has " + std::to_string(bytes.size()));
  }

  auto read_block = [&](std::size_t count, std::vector<float>& f32,
                        std::vector<std::uint16_t>& f16) {
    if (model.quantized) {
      f16.reserve(count);
      for (std::size_t i = 0; i < count; ++i) f16.push_back(c.u16());
    } else {
      f32.reserve(count);
      for (std::size_t i = 0; i < count; ++i) f32.push_back(c.f32());
    }
  };
  read_block(model.coarse_arch.parameter_count(), model.coarse_f32, model.coarse_f16);
  read_block(model.fine_arch.parameter_count(), model.fine_f32, model.fine_f16);
  return model;
}

void save_model_file(const CompressedModel& model, const std::string& path) {
  std::vector<std::uint8_t> bytes = serialize(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

CompressedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace hns
