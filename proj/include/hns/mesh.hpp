// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hns/vec3.hpp"

namespace hns {

using Face = std::array<std::uint32_t, 3>;

// Indexed triangle mesh with counter-clockwise (outward) face orientation.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }

  const Vec3& corner(std::uint32_t face, int i) const { return vertices[faces[face][i]]; }

  Vec3 face_centroid(std::uint32_t face) const {
    const Face& f = faces[face];
    return (vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) / 3.0;
  }

  double face_area(std::uint32_t face) const {
    const Face& f = faces[face];
    return triangle_area(vertices[f[0]], vertices[f[1]], vertices[f[2]]);
  }

  Vec3 face_normal(std::uint32_t face) const {
    const Face& f = faces[face];
    return triangle_normal(vertices[f[0]], vertices[f[1]], vertices[f[2]]);
  }

  double total_area() const;
  double bounding_box_diagonal() const;
  void bounding_box(Vec3* lo, Vec3* hi) const;
};

struct TopologyReport {
  bool is_watertight = false;
  bool orientation_consistent = false;
  int euler_characteristic = 0;
  int genus = -1;  // computed only when watertight
  std::size_t boundary_edge_count = 0;
  std::size_t nonmanifold_edge_count = 0;
  std::size_t edge_count = 0;
};

TopologyReport validate_topology(const TriangleMesh& mesh);

struct SurfaceSample {
  std::uint32_t face_index = 0;
  std::array<double, 3> barycentric{};
  Vec3 position;
};

struct NormalizeResult {
  TriangleMesh mesh;  // bounding-box centered, unit bounding-box diagonal
  double scale = 1.0; // original = normalized * scale + offset
  Vec3 offset;
};

NormalizeResult normalize_mesh(const TriangleMesh& mesh);
TriangleMesh denormalize_mesh(const TriangleMesh& mesh, double scale, const Vec3& offset);

// Area-proportional face selection with uniform in-face placement via the
// square-root barycentric transform. Samples are independent streams keyed by
// (seed, index), so draws can be evaluated in parallel and out of order.
class SurfaceSampler {
 public:
  explicit SurfaceSampler(const TriangleMesh& mesh);

  SurfaceSample sample_at(std::uint64_t seed, std::uint64_t index) const;
  std::uint32_t face_at(std::uint64_t seed, std::uint64_t index) const;
  double total_area() const { return total_area_; }

 private:
  const TriangleMesh* mesh_;
  std::vector<double> cdf_;  // per-face cumulative area fractions
  double total_area_ = 0.0;
};

std::vector<SurfaceSample> sample_surface_uniform(const TriangleMesh& mesh, std::size_t n,
                                                  std::uint64_t seed);

// Vertex one-ring adjacency (sorted, deduplicated).
std::vector<std::vector<std::uint32_t>> vertex_adjacency(const TriangleMesh& mesh);

// Barycentric placement helpers shared by the samplers.
std::array<double, 3> uniform_barycentric(double r1, double r2);

inline Vec3 barycentric_point(const TriangleMesh& mesh, std::uint32_t face,
                              const std::array<double, 3>& b) {
  const Face& f = mesh.faces[face];
  return mesh.vertices[f[0]] * b[0] + mesh.vertices[f[1]] * b[1] + mesh.vertices[f[2]] * b[2];
}

}  // namespace hns
