// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/spherical_param.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hns/errors.hpp"

namespace hns {

namespace {

double orientation_det(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(a, cross(b, c));
}

// signed solid angle subtended at the origin (Van Oosterom-Strackee)
double signed_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  double la = norm(a), lb = norm(b), lc = norm(c);
  double numer = orientation_det(a, b, c);
  double denom = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
  return 2.0 * std::atan2(numer, denom);
}

int count_flipped(const std::vector<Vec3>& pos, const std::vector<Face>& faces) {
  std::size_t positive = 0, negative = 0;
  for (const Face& f : faces) {
    double det = orientation_det(pos[f[0]], pos[f[1]], pos[f[2]]);
    if (det > 0.0) ++positive;
    else ++negative;
  }
  bool majority_positive = positive >= negative;
  int flipped = 0;
  for (const Face& f : faces) {
    double det = orientation_det(pos[f[0]], pos[f[1]], pos[f[2]]);
    bool pos_face = det > 0.0;
    if (det == 0.0 || pos_face != majority_positive) ++flipped;
  }
  return flipped;
}

Vec3 vertex_mean(const std::vector<Vec3>& pos) {
  Vec3 sum;
  for (const Vec3& v : pos) sum += v;
  return sum / static_cast<double>(pos.size());
}

}  // namespace

Vec3 correspond(const ParameterizedShape& shape, CorrespondTarget target, std::uint32_t face,
                const std::array<double, 3>& barycentric) {
  const TriangleMesh& mesh =
      target == CorrespondTarget::Original ? shape.original : shape.coarse;
  return barycentric_point(mesh, face, barycentric);
}

BijectivityReport check_bijectivity(const TriangleMesh& sphere) {
  BijectivityReport report;
  std::size_t positive = 0, negative = 0;
  for (const Face& f : sphere.faces) {
    double det = orientation_det(sphere.vertices[f[0]], sphere.vertices[f[1]],
                                 sphere.vertices[f[2]]);
    if (det > 0.0) ++positive;
    else ++negative;
  }
  bool majority_positive = positive >= negative;
  for (std::uint32_t i = 0; i < sphere.faces.size(); ++i) {
    const Face& f = sphere.faces[i];
    double det = orientation_det(sphere.vertices[f[0]], sphere.vertices[f[1]],
                                 sphere.vertices[f[2]]);
    if (det == 0.0 || (det > 0.0) != majority_positive) report.flipped_faces.push_back(i);
  }

  double total = 0.0;
  for (const Face& f : sphere.faces) {
    total += signed_solid_angle(sphere.vertices[f[0]], sphere.vertices[f[1]],
                                sphere.vertices[f[2]]);
  }
  double winding = total / (4.0 * std::numbers::pi);
  report.origin_inside = std::abs(winding) > 0.5;
  report.ok = report.flipped_faces.empty() && report.origin_inside;
  return report;
}

TriangleMesh spherical_parameterize(const TriangleMesh& mesh, const ParameterizeOptions& opts) {
  TopologyReport topo = validate_topology(mesh);
  if (!topo.is_watertight || topo.genus != 0) {
    std::ostringstream msg;
    msg << "spherical parameterization requires a watertight genus-0 mesh (watertight="
        << (topo.is_watertight ? "yes" : "no") << ", genus=" << topo.genus
        << ", boundary edges=" << topo.boundary_edge_count << ")";
    throw TopologyError(msg.str());
  }

  auto adjacency = vertex_adjacency(mesh);
  Vec3 centroid = vertex_mean(mesh.vertices);
  std::vector<Vec3> pos(mesh.vertices.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    Vec3 d = mesh.vertices[i] - centroid;
    double n = norm(d);
    if (n == 0.0) throw ParameterizationError("vertex coincides with the centroid");
    pos[i] = d / n;
  }

  int flips = count_flipped(pos, mesh.faces);
  double lambda = opts.step_size;
  std::vector<Vec3> candidate(pos.size());
  for (int iter = 0; iter < opts.max_iterations && flips > 0; ++iter) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      Vec3 mean;
      for (std::uint32_t nb : adjacency[i]) mean += pos[nb];
      mean = mean / static_cast<double>(adjacency[i].size());
      candidate[i] = pos[i] + (mean - pos[i]) * lambda;
    }
    Vec3 center = vertex_mean(candidate);
    for (Vec3& v : candidate) v = normalized(v - center);

    int cand_flips = count_flipped(candidate, mesh.faces);
    if (cand_flips > flips) {
      lambda *= 0.5;  // backtrack, the step made things worse
      if (lambda < 1e-6) break;
      continue;
    }

    double movement = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      movement = std::max(movement, norm(candidate[i] - pos[i]));
    }
    pos.swap(candidate);
    flips = cand_flips;
    if (flips > 0 && movement < opts.tolerance) break;  // stalled
  }

  if (flips > 0) {
    std::ostringstream msg;
    msg << "failed to reach a fold-free spherical embedding within " << opts.max_iterations
        << " iterations; " << flips << " faces remain flipped";
    throw ParameterizationError(msg.str());
  }

  TriangleMesh sphere;
  sphere.vertices = std::move(pos);
  sphere.faces = mesh.faces;
  BijectivityReport report = check_bijectivity(sphere);
  if (!report.ok) {
    throw ParameterizationError(report.origin_inside
                                    ? "embedding has flipped faces"
                                    : "embedding does not enclose the origin");
  }
  return sphere;
}

TriangleMesh import_parameterization(const TriangleMesh& mesh,
                                     const TriangleMesh& sphere_candidate) {
  if (sphere_candidate.vertices.size() != mesh.vertices.size() ||
      sphere_candidate.faces != mesh.faces) {
    throw InvalidArgumentError(
        "imported sphere does not match the mesh connectivity (vertex count and face list "
        "must be identical)");
  }
  TriangleMesh sphere;
  sphere.faces = mesh.faces;
  sphere.vertices.reserve(sphere_candidate.vertices.size());
  for (const Vec3& v : sphere_candidate.vertices) {
    double n = norm(v);
    if (n == 0.0) throw InvalidArgumentError("imported sphere has a zero vertex");
    sphere.vertices.push_back(v / n);
  }
  BijectivityReport report = check_bijectivity(sphere);
  if (!report.ok) {
    std::ostringstream msg;
    if (!report.flipped_faces.empty()) {
      msg << "imported sphere is not bijective: " << report.flipped_faces.size()
          << " flipped faces (";
      for (std::size_t i = 0; i < report.flipped_faces.size() && i < 8; ++i) {
        if (i) msg << ", ";
        msg << report.flipped_faces[i];
      }
      if (report.flipped_faces.size() > 8) msg << ", ...";
      msg << ")";
    } else {
      msg << "imported sphere does not enclose the origin";
    }
    throw InvalidArgumentError(msg.str());
  }
  return sphere;
}

TriangleMesh laplacian_smooth(const TriangleMesh& mesh, int iterations, double lambda) {
  if (iterations < 0) throw InvalidArgumentError("laplacian_smooth: iterations must be >= 0");
  if (!(lambda > 0.0) || lambda > 1.0) {
    throw InvalidArgumentError("laplacian_smooth: lambda must be in (0, 1]");
  }
  TriangleMesh out = mesh;
  if (iterations == 0) return out;
  auto adjacency = vertex_adjacency(mesh);
  std::vector<Vec3> next(out.vertices.size());
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < out.vertices.size(); ++i) {
      if (adjacency[i].empty()) {
        next[i] = out.vertices[i];
        continue;
      }
      Vec3 mean;
      for (std::uint32_t nb : adjacency[i]) mean += out.vertices[nb];
      mean = mean / static_cast<double>(adjacency[i].size());
      next[i] = out.vertices[i] + (mean - out.vertices[i]) * lambda;
    }
    out.vertices.swap(next);
  }
  return out;
}

SphereLocator::SphereLocator(const TriangleMesh& sphere) : sphere_(sphere), bvh_(sphere_) {}

namespace {

std::array<double, 3> clamp_barycentric(std::array<double, 3> b) {
  for (double& x : b) x = std::max(x, 0.0);
  double s = b[0] + b[1] + b[2];
  if (s > 0.0) {
    for (double& x : b) x /= s;
  }
  return b;
}

}  // namespace

LocateResult SphereLocator::locate(const Vec3& direction) const {
  Vec3 dir = normalized(direction);
  auto hit = bvh_.ray_intersect({0.0, 0.0, 0.0}, dir, 1e-9);
  if (hit) return {hit->face_index, clamp_barycentric(hit->barycentric)};

  // A ray squeezing exactly between faces can miss numerically; fall back to
  // the nearest surface point.
  ClosestPointResult cp = bvh_.closest_point(dir);
  if (distance(normalized(cp.point), dir) > 1e-3) {
    throw InternalError("locate: direction has no intersection; sphere mesh does not enclose "
                        "the origin");
  }
  const Face& f = sphere_.faces[cp.face_index];
  TriangleClosest tc = closest_point_on_triangle(cp.point, sphere_.vertices[f[0]],
                                                 sphere_.vertices[f[1]], sphere_.vertices[f[2]]);
  return {cp.face_index, clamp_barycentric(tc.barycentric)};
}

ParameterizedShape make_parameterized_shape(TriangleMesh original, TriangleMesh sphere,
                                            TriangleMesh coarse) {
  if (sphere.faces != original.faces || coarse.faces != original.faces ||
      sphere.vertices.size() != original.vertices.size() ||
      coarse.vertices.size() != original.vertices.size()) {
    throw InvalidArgumentError("parameterized shape requires one shared face list");
  }
  ParameterizedShape shape;
  shape.original = std::move(original);
  shape.sphere = std::move(sphere);
  shape.coarse = std::move(coarse);
  return shape;
}

}  // namespace hns
