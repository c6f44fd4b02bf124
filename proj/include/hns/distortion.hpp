// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>

#include "hns/icosphere.hpp"
#include "hns/mlp.hpp"

namespace hns {

// S^2(u, v) = (sin v cos u, sin v sin u, cos v), u azimuth in [0, 2pi),
// v polar in [0, pi].
Vec3 sphere_point(double u, double v);
void sphere_uv(const Vec3& unit_point, double* u, double* v);

// Supplies the 3x3 Jacobian of a sphere->R^3 map at a unit point. Production
// uses an Mlp; tests substitute analytic stubs.
using JacobianFn = std::function<Eigen::Matrix3d(const Vec3&)>;

// First fundamental form of q(u,v) = map(S^2(u,v)), assembled from the pushed
// tangents dq/du and dq/dv.
Eigen::Matrix2d metric_tensor(const JacobianFn& jacobian, double u, double v);

template <typename Real>
Eigen::Matrix2d metric_tensor(const MlpT<Real>& coarse_net, double u, double v);

// d(u,v) = sqrt(det I / sin^2 v); det clamped at 0, sin^2 v clamped at 1e-12.
double distortion_ratio(const Eigen::Matrix2d& first_fundamental_form, double v);

// Per-face sampling weights over an icosphere, proportional to the distortion
// ratio at the normalized face center (optionally also to the true chordal
// face area).
struct DistortionTable {
  Icosphere sphere;
  std::vector<double> ratios;        // raw distortion ratios per face
  std::vector<double> cdf;           // normalized cumulative distribution
  bool weighted_by_area = false;

  std::uint32_t draw(double u01) const;
  double probability(std::uint32_t face) const {
    return face == 0 ? cdf[0] : cdf[face] - cdf[face - 1];
  }
};

DistortionTable build_distortion_table(const JacobianFn& jacobian, int level,
                                       bool weight_by_area = false);

template <typename Real>
DistortionTable build_distortion_table(const MlpT<Real>& coarse_net, int level,
                                       bool weight_by_area = false);

}  // namespace hns
