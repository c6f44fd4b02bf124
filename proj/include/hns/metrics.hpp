// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "hns/mesh.hpp"

namespace hns {

enum class MetricDirection {
  SourceToReference,
  ReferenceToSource,
  Symmetric,
};

struct MetricsReport {
  double d_pm_mean = 0.0;           // model units; Table-style reporting scales by 1e4
  double d_n_mean_degrees = 0.0;
  std::size_t n_samples = 0;
  MetricDirection direction = MetricDirection::Symmetric;
};

// Mean distance from uniform surface samples of `source` to the nearest point
// on `reference`. Meshes are compared as given; callers normalize beforehand
// when unit-diagonal reporting is wanted.
double point_to_mesh_error(const TriangleMesh& source, const TriangleMesh& reference,
                           std::size_t n, std::uint64_t seed);

// Mean angle (degrees) between the source face normal at each sample and the
// reference face normal at the closest reference point.
double normal_error_degrees(const TriangleMesh& source, const TriangleMesh& reference,
                            std::size_t n, std::uint64_t seed);

MetricsReport evaluate_metrics(const TriangleMesh& recon, const TriangleMesh& reference,
                               std::size_t n, std::uint64_t seed,
                               MetricDirection direction = MetricDirection::Symmetric);

}  // namespace hns
