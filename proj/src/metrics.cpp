// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hns/bvh.hpp"
#include "hns/errors.hpp"
#include "hns/parallel.hpp"
#include "hns/rng.hpp"

namespace hns {

namespace {

struct Accumulated {
  double distance_sum = 0.0;
  double angle_sum = 0.0;
};

Accumulated accumulate_one_direction(const TriangleMesh& source, const TriangleMesh& reference,
                                     std::size_t n, std::uint64_t seed) {
  SurfaceSampler sampler(source);
  Bvh bvh(reference);

  // fixed-size blocks keep per-sample sums in deterministic order
  constexpr std::size_t kBlock = 4096;
  std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Accumulated> partial(blocks);
  parallel_for(blocks, 0, [&](std::size_t bi) {
    std::size_t lo = bi * kBlock;
    std::size_t hi = std::min(lo + kBlock, n);
    Accumulated acc;
    for (std::size_t i = lo; i < hi; ++i) {
      SurfaceSample s = sampler.sample_at(seed, i);
      ClosestPointResult cp = bvh.closest_point(s.position);
      acc.distance_sum += cp.distance;
      Vec3 ns = source.face_normal(s.face_index);
      Vec3 nr = reference.face_normal(cp.face_index);
      double c = std::clamp(dot(ns, nr), -1.0, 1.0);
      acc.angle_sum += std::acos(c) * (180.0 / std::numbers::pi);
    }
    partial[bi] = acc;
  });

  Accumulated total;
  for (const Accumulated& p : partial) {
    total.distance_sum += p.distance_sum;
    total.angle_sum += p.angle_sum;
  }
  return total;
}

}  // namespace

double point_to_mesh_error(const TriangleMesh& source, const TriangleMesh& reference,
                           std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgumentError("point_to_mesh_error: n must be >= 1");
  return accumulate_one_direction(source, reference, n, seed).distance_sum /
         static_cast<double>(n);
}

double normal_error_degrees(const TriangleMesh& source, const TriangleMesh& reference,
                            std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgumentError("normal_error_degrees: n must be >= 1");
  return accumulate_one_direction(source, reference, n, seed).angle_sum / static_cast<double>(n);
}

MetricsReport evaluate_metrics(const TriangleMesh& recon, const TriangleMesh& reference,
                               std::size_t n, std::uint64_t seed, MetricDirection direction) {
  if (n == 0) throw InvalidArgumentError("evaluate_metrics: n must be >= 1");
  MetricsReport report;
  report.direction = direction;
  report.n_samples = n;
  if (direction == MetricDirection::SourceToReference) {
    Accumulated acc = accumulate_one_direction(recon, reference, n, seed);
    report.d_pm_mean = acc.distance_sum / static_cast<double>(n);
    report.d_n_mean_degrees = acc.angle_sum / static_cast<double>(n);
  } else if (direction == MetricDirection::ReferenceToSource) {
    Accumulated acc = accumulate_one_direction(reference, recon, n, seed);
    report.d_pm_mean = acc.distance_sum / static_cast<double>(n);
    report.d_n_mean_degrees = acc.angle_sum / static_cast<double>(n);
  } else {
    Accumulated fwd = accumulate_one_direction(recon, reference, n, seed);
    Accumulated bwd = accumulate_one_direction(reference, recon, n, mix_seed(seed, 1));
    report.d_pm_mean =
        0.5 * (fwd.distance_sum + bwd.distance_sum) / static_cast<double>(n);
    report.d_n_mean_degrees = 0.5 * (fwd.angle_sum + bwd.angle_sum) / static_cast<double>(n);
  }
  return report;
}

}  // namespace hns
