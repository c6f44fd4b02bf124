// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hns/mesh.hpp"

namespace hns {

struct ClosestPointResult {
  Vec3 point;
  std::uint32_t face_index = 0;
  double distance = 0.0;
};

struct RayHit {
  std::uint32_t face_index = 0;
  std::array<double, 3> barycentric{};
  double t = 0.0;
};

struct TriangleClosest {
  Vec3 point;
  std::array<double, 3> barycentric{};
};

TriangleClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                          const Vec3& c);

std::optional<RayHit> ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c,
                                             double bary_tolerance = 1e-12);

// Axis-aligned BVH over the faces of one mesh. Construction copies triangle
// data; queries are read-only and safe to call concurrently.
class Bvh {
 public:
  explicit Bvh(const TriangleMesh& mesh);

  ClosestPointResult closest_point(const Vec3& query) const;
  std::optional<RayHit> ray_intersect(const Vec3& origin, const Vec3& direction,
                                      double bary_tolerance = 1e-12) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Vec3 lo, hi;
    std::uint32_t left = 0;   // child index, or first triangle for leaves
    std::uint32_t right = 0;  // child index (internal only)
    std::uint32_t count = 0;  // triangles in leaf; 0 for internal nodes
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  double box_distance2(const Node& n, const Vec3& q) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;    // triangle indices, leaf-contiguous
  std::vector<std::array<Vec3, 3>> tris_;  // indexed by original face id
  std::vector<Vec3> centroids_;
};

}  // namespace hns
