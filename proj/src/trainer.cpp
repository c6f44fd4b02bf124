// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "hns/errors.hpp"
#include "hns/parallel.hpp"
#include "hns/rng.hpp"

namespace hns {

namespace {

// distinct stream tags keep coarse/fine/init draws decorrelated
constexpr std::uint64_t kCoarseInitStream = 0x636f617273656e65ull;
constexpr std::uint64_t kFineInitStream = 0x66696e656e657400ull;
constexpr std::uint64_t kCoarseIterBase = 0x1000000000000000ull;
constexpr std::uint64_t kFineIterBase = 0x2000000000000000ull;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PresetSpec preset_spec(SizePreset preset) {
  switch (preset) {
    case SizePreset::k50KB: return {"50KB", 18, 36};
    case SizePreset::k85KB: return {"85KB", 20, 44};
    case SizePreset::k165KB: return {"165KB", 24, 58};
    case SizePreset::k260KB: return {"260KB", 28, 68};
    case SizePreset::kCustom: return {"custom", 0, 0};
  }
  throw InvalidArgumentError("unknown preset");
}

SizePreset preset_from_name(const std::string& name) {
  if (name == "50KB" || name == "50kb" || name == "50") return SizePreset::k50KB;
  if (name == "85KB" || name == "85kb" || name == "85") return SizePreset::k85KB;
  if (name == "165KB" || name == "165kb" || name == "165") return SizePreset::k165KB;
  if (name == "260KB" || name == "260kb" || name == "260") return SizePreset::k260KB;
  if (name == "custom") return SizePreset::kCustom;
  throw InvalidArgumentError("unknown preset '" + name +
                             "' (expected 50KB, 85KB, 165KB, 260KB, or custom)");
}

MlpArchitecture TrainConfig::fine_architecture() const {
  int layers = custom_fine_layers;
  int width = custom_fine_width;
  if (preset != SizePreset::kCustom) {
    PresetSpec spec = preset_spec(preset);
    layers = spec.fine_hidden_layers;
    width = spec.fine_hidden_width;
  }
  return MlpArchitecture::fine(layers, width, positional_levels);
}

void TrainConfig::validate() const {
  if (coarse_iterations < 0 || fine_iterations < 0) {
    throw InvalidArgumentError("iteration counts must be >= 0");
  }
  if (batch_size <= 0) throw InvalidArgumentError("batch size must be positive");
  if (!(base_lr > 0.0)) throw InvalidArgumentError("learning rate must be positive");
  if (table_level < 0 || table_level > 8) {
    throw InvalidArgumentError("table level must be in [0, 8]");
  }
  if (smoothing_iterations < 0) throw InvalidArgumentError("smoothing iterations must be >= 0");
  if (!(smoothing_lambda > 0.0) || smoothing_lambda > 1.0) {
    throw InvalidArgumentError("smoothing lambda must be in (0, 1]");
  }
  fine_architecture().validate();
}

Mlp train_coarse(const ParameterizedShape& shape, const TrainConfig& config,
                 const ProgressFn& progress) {
  MlpArchitecture arch = MlpArchitecture::coarse();
  Mlp net = Mlp::random_init(arch, mix_seed(config.seed, kCoarseInitStream));
  if (config.coarse_iterations == 0) return net;

  AdamW optimizer(arch, config.adamw);
  SurfaceSampler sampler(shape.sphere);
  const int n = config.batch_size;
  Mlp::Matrix inputs(n, 3), targets(n, 3);
  Mlp gradients = Mlp::zeros(arch);

  for (int iter = 0; iter < config.coarse_iterations; ++iter) {
    std::uint64_t iter_seed = mix_seed(config.seed, kCoarseIterBase + static_cast<std::uint64_t>(iter));
    parallel_for(static_cast<std::size_t>(n), config.workers, [&](std::size_t j) {
      SurfaceSample s = sampler.sample_at(iter_seed, j);
      Vec3 p = normalized(s.position);
      Vec3 t = correspond(shape, CorrespondTarget::Coarse, s.face_index, s.barycentric);
      Eigen::Index r = static_cast<Eigen::Index>(j);
      inputs(r, 0) = static_cast<float>(p.x);
      inputs(r, 1) = static_cast<float>(p.y);
      inputs(r, 2) = static_cast<float>(p.z);
      targets(r, 0) = static_cast<float>(t.x);
      targets(r, 1) = static_cast<float>(t.y);
      targets(r, 2) = static_cast<float>(t.z);
    });

    float loss;
    try {
      loss = net.forward_backward(inputs, targets, &gradients);
    } catch (const NumericError& e) {
      throw TrainingError(std::string("coarse training diverged: ") + e.what());
    }
    double lr = cosine_lr(iter, config.coarse_iterations, config.base_lr);
    optimizer.step(net, gradients, static_cast<float>(lr));
    if (progress) {
      progress({"coarse", iter + 1, config.coarse_iterations, static_cast<double>(loss), lr});
    }
  }
  return net;
}

Mlp train_fine(const ParameterizedShape& shape, const Mlp& coarse_net,
               const DistortionTable* table, const SphereLocator& locator,
               const TrainConfig& config, const ProgressFn& progress) {
  if (config.fine_sampling == FineSampling::DistortionTable && table == nullptr) {
    throw InvalidArgumentError("train_fine: distortion-table sampling requires a table");
  }
  MlpArchitecture arch = config.fine_architecture();
  Mlp net = Mlp::random_init(arch, mix_seed(config.seed, kFineInitStream));
  if (config.fine_iterations == 0) return net;

  AdamW optimizer(arch, config.adamw);
  const int n = config.batch_size;
  const int levels = arch.positional_levels;
  Mlp::Matrix directions(n, 3), originals(n, 3);
  Mlp gradients = Mlp::zeros(arch);

  for (int iter = 0; iter < config.fine_iterations; ++iter) {
    std::uint64_t iter_seed = mix_seed(config.seed, kFineIterBase + static_cast<std::uint64_t>(iter));
    parallel_for(static_cast<std::size_t>(n), config.workers, [&](std::size_t j) {
      Rng rng(iter_seed, j);
      Vec3 p;
      if (config.fine_sampling == FineSampling::DistortionTable) {
        std::uint32_t face = table->draw(rng.next_double());
        std::array<double, 3> bary = uniform_barycentric(rng.next_double(), rng.next_double());
        p = normalized(barycentric_point(table->sphere.mesh, face, bary));
      } else {
        // isotropic direction via Box-Muller
        double u1 = rng.next_double(), u2 = rng.next_double();
        double u3 = rng.next_double(), u4 = rng.next_double();
        double r1 = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
        double r2 = std::sqrt(-2.0 * std::log(std::max(u3, 1e-300)));
        Vec3 g(r1 * std::cos(2.0 * std::numbers::pi * u2),
               r1 * std::sin(2.0 * std::numbers::pi * u2),
               r2 * std::cos(2.0 * std::numbers::pi * u4));
        p = norm(g) > 0.0 ? normalized(g) : Vec3(1.0, 0.0, 0.0);
      }
      LocateResult loc = locator.locate(p);
      Vec3 orig = correspond(shape, CorrespondTarget::Original, loc.face_index, loc.barycentric);
      Eigen::Index r = static_cast<Eigen::Index>(j);
      directions(r, 0) = static_cast<float>(p.x);
      directions(r, 1) = static_cast<float>(p.y);
      directions(r, 2) = static_cast<float>(p.z);
      originals(r, 0) = static_cast<float>(orig.x);
      originals(r, 1) = static_cast<float>(orig.y);
      originals(r, 2) = static_cast<float>(orig.z);
    });

    // q_c is evaluated, never optimized, in this stage
    Mlp::Matrix coarse_points = coarse_net.forward(directions);
    Mlp::Matrix encoded = positional_encode_batch<float>(coarse_points, levels);
    Mlp::Matrix displacement = originals - coarse_points;

    float loss;
    try {
      loss = net.forward_backward(encoded, displacement, &gradients);
    } catch (const NumericError& e) {
      throw TrainingError(std::string("fine training diverged: ") + e.what());
    }
    double lr = cosine_lr(iter, config.fine_iterations, config.base_lr);
    optimizer.step(net, gradients, static_cast<float>(lr));
    if (progress) {
      progress({"fine", iter + 1, config.fine_iterations, static_cast<double>(loss), lr});
    }
  }
  return net;
}

namespace {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.status(), std::string("encode[") + stage + "]: " + e.what());
  }
}

}  // namespace

EncodeResult encode(const TriangleMesh& input, const TrainConfig& config,
                    const TriangleMesh* imported_sphere, const ProgressFn& progress) {
  config.validate();
  EncodeResult result;
  auto t0 = std::chrono::steady_clock::now();

  NormalizeResult normalized = run_stage("normalize", [&] { return normalize_mesh(input); });

  TopologyReport topo = validate_topology(normalized.mesh);
  if (!topo.is_watertight || topo.genus != 0) {
    throw TopologyError("encode[topology]: input must be watertight with genus 0 (watertight=" +
                        std::string(topo.is_watertight ? "yes" : "no") +
                        ", genus=" + std::to_string(topo.genus) + ")");
  }

  TriangleMesh sphere = run_stage("parameterize", [&] {
    if (imported_sphere) {
      result.used_imported_sphere = true;
      // the sidecar sphere is aligned with the raw input vertex order
      return import_parameterization(normalized.mesh, *imported_sphere);
    }
    if (progress) progress({"parameterize", 0, 0, 0.0, 0.0});
    return spherical_parameterize(normalized.mesh, config.parameterize);
  });
  result.parameterize_seconds = seconds_since(t0);

  TriangleMesh coarse = run_stage("smooth", [&] {
    return laplacian_smooth(normalized.mesh, config.smoothing_iterations,
                            config.smoothing_lambda);
  });
  ParameterizedShape shape =
      make_parameterized_shape(normalized.mesh, std::move(sphere), std::move(coarse));

  auto t1 = std::chrono::steady_clock::now();
  double last_coarse_loss = 0.0;
  Mlp coarse_net = run_stage("coarse", [&] {
    return train_coarse(shape, config, [&](const TrainProgress& p) {
      last_coarse_loss = p.loss;
      if (progress) progress(p);
    });
  });
  result.final_coarse_loss = last_coarse_loss;
  result.coarse_seconds = seconds_since(t1);

  auto t2 = std::chrono::steady_clock::now();
  DistortionTable table = run_stage("table", [&] {
    if (progress) progress({"table", 0, 0, 0.0, 0.0});
    return build_distortion_table(coarse_net, config.table_level, config.table_weight_by_area);
  });
  result.table_seconds = seconds_since(t2);

  auto t3 = std::chrono::steady_clock::now();
  double last_fine_loss = 0.0;
  Mlp fine_net = run_stage("fine", [&] {
    SphereLocator locator(shape.sphere);
    return train_fine(shape, coarse_net, &table, locator, config, [&](const TrainProgress& p) {
      last_fine_loss = p.loss;
      if (progress) progress(p);
    });
  });
  result.final_fine_loss = last_fine_loss;
  result.fine_seconds = seconds_since(t3);

  result.model = run_stage("serialize", [&] {
    return make_compressed_model(
        coarse_net, fine_net, config.quantize, config.smoothing_iterations,
        static_cast<float>(config.smoothing_lambda), static_cast<float>(normalized.scale),
        {static_cast<float>(normalized.offset.x), static_cast<float>(normalized.offset.y),
         static_cast<float>(normalized.offset.z)});
  });
  return result;
}

}  // namespace hns
