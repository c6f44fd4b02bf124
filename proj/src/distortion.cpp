// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hns/errors.hpp"

namespace hns {

Vec3 sphere_point(double u, double v) {
  double sv = std::sin(v);
  return {sv * std::cos(u), sv * std::sin(u), std::cos(v)};
}

void sphere_uv(const Vec3& unit_point, double* u, double* v) {
  *v = std::acos(std::clamp(unit_point.z, -1.0, 1.0));
  if (unit_point.x == 0.0 && unit_point.y == 0.0) {
    *u = 0.0;  // pole convention
    return;
  }
  double az = std::atan2(unit_point.y, unit_point.x);
  if (az < 0.0) az += 2.0 * std::numbers::pi;
  *u = az;
}

Eigen::Matrix2d metric_tensor(const JacobianFn& jacobian, double u, double v) {
  Vec3 p = sphere_point(u, v);
  Eigen::Matrix3d J = jacobian(p);
  double su = std::sin(u), cu = std::cos(u);
  double sv = std::sin(v), cv = std::cos(v);
  Eigen::Vector3d tangent_u(-sv * su, sv * cu, 0.0);
  Eigen::Vector3d tangent_v(cv * cu, cv * su, -sv);
  Eigen::Vector3d qu = J * tangent_u;
  Eigen::Vector3d qv = J * tangent_v;
  Eigen::Matrix2d I;
  I << qu.dot(qu), qu.dot(qv), qu.dot(qv), qv.dot(qv);
  return I;
}

template <typename Real>
Eigen::Matrix2d metric_tensor(const MlpT<Real>& coarse_net, double u, double v) {
  return metric_tensor(
      [&coarse_net](const Vec3& p) {
        typename MlpT<Real>::Vector x(3);
        x << static_cast<Real>(p.x), static_cast<Real>(p.y), static_cast<Real>(p.z);
        return coarse_net.input_jacobian(x).template cast<double>().eval();
      },
      u, v);
}

template Eigen::Matrix2d metric_tensor<float>(const MlpT<float>&, double, double);
template Eigen::Matrix2d metric_tensor<double>(const MlpT<double>&, double, double);

double distortion_ratio(const Eigen::Matrix2d& first_fundamental_form, double v) {
  const Eigen::Matrix2d& I = first_fundamental_form;
  double det = I(0, 0) * I(1, 1) - I(0, 1) * I(1, 0);
  det = std::max(det, 0.0);
  double sv2 = std::max(std::sin(v) * std::sin(v), 1e-12);
  return std::sqrt(det / sv2);
}

std::uint32_t DistortionTable::draw(double u01) const {
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u01);
  if (it == cdf.end()) --it;
  return static_cast<std::uint32_t>(it - cdf.begin());
}

DistortionTable build_distortion_table(const JacobianFn& jacobian, int level,
                                       bool weight_by_area) {
  DistortionTable table;
  table.sphere = make_icosphere(level);
  table.weighted_by_area = weight_by_area;
  std::size_t n = table.sphere.mesh.faces.size();
  table.ratios.resize(n);
  table.cdf.resize(n);

  double acc = 0.0;
  for (std::uint32_t f = 0; f < n; ++f) {
    Vec3 center = normalized(table.sphere.mesh.face_centroid(f));
    double u, v;
    sphere_uv(center, &u, &v);
    double d = distortion_ratio(metric_tensor(jacobian, u, v), v);
    table.ratios[f] = d;
    double weight = weight_by_area ? d * table.sphere.mesh.face_area(f) : d;
    acc += weight;
    table.cdf[f] = acc;
  }
  if (!(acc > 0.0)) {
    throw TrainingError("distortion table has all-zero weights; the coarse network is degenerate");
  }
  for (double& c : table.cdf) c /= acc;
  table.cdf.back() = 1.0;
  return table;
}

template <typename Real>
DistortionTable build_distortion_table(const MlpT<Real>& coarse_net, int level,
                                       bool weight_by_area) {
  return build_distortion_table(
      [&coarse_net](const Vec3& p) {
        typename MlpT<Real>::Vector x(3);
        x << static_cast<Real>(p.x), static_cast<Real>(p.y), static_cast<Real>(p.z);
        return coarse_net.input_jacobian(x).template cast<double>().eval();
      },
      level, weight_by_area);
}

template DistortionTable build_distortion_table<float>(const MlpT<float>&, int, bool);
template DistortionTable build_distortion_table<double>(const MlpT<double>&, int, bool);

}  // namespace hns
