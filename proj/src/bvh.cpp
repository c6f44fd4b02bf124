// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/bvh.hpp"

#include <algorithm>
#include <limits>

#include "hns/errors.hpp"

namespace hns {

TriangleClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                          const Vec3& c) {
  // Ericson, "Real-Time Collision Detection", 5.1.5
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, {1.0, 0.0, 0.0}};

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, {0.0, 1.0, 0.0}};

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return {a + ab * v, {1.0 - v, v, 0.0}};
  }

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, {0.0, 0.0, 1.0}};

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return {a + ac * w, {1.0 - w, 0.0, w}};
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + (c - b) * w, {0.0, 1.0 - w, w}};
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return {a + ab * v + ac * w, {1.0 - v - w, v, w}};
}

std::optional<RayHit> ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c, double bary_tolerance) {
  // Moeller-Trumbore
  Vec3 e1 = b - a, e2 = c - a;
  Vec3 pv = cross(dir, e2);
  double det = dot(e1, pv);
  if (std::abs(det) < 1e-14) return std::nullopt;
  double inv = 1.0 / det;
  Vec3 tv = origin - a;
  double u = dot(tv, pv) * inv;
  if (u < -bary_tolerance || u > 1.0 + bary_tolerance) return std::nullopt;
  Vec3 qv = cross(tv, e1);
  double v = dot(dir, qv) * inv;
  if (v < -bary_tolerance || u + v > 1.0 + bary_tolerance) return std::nullopt;
  double t = dot(e2, qv) * inv;
  if (t <= 0.0) return std::nullopt;
  RayHit hit;
  hit.t = t;
  hit.barycentric = {1.0 - u - v, u, v};
  return hit;
}

Bvh::Bvh(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) throw InvalidArgumentError("Bvh: mesh has no faces");
  std::size_t n = mesh.faces.size();
  tris_.resize(n);
  centroids_.resize(n);
  order_.resize(n);
  for (std::uint32_t f = 0; f < n; ++f) {
    const Face& face = mesh.faces[f];
    tris_[f] = {mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]};
    centroids_[f] = mesh.face_centroid(f);
    order_[f] = f;
  }
  nodes_.reserve(2 * n);
  build(0, static_cast<std::uint32_t>(n));
  centroids_.clear();
  centroids_.shrink_to_fit();
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end) {
  std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  Vec3 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max());
  Vec3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (const Vec3& v : tris_[order_[i]]) {
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    }
  }
  nodes_[index].lo = lo;
  nodes_[index].hi = hi;

  constexpr std::uint32_t kLeafSize = 4;
  if (end - begin <= kLeafSize) {
    nodes_[index].left = begin;
    nodes_[index].count = end - begin;
    return index;
  }

  Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > extent.x) axis = 1;
  if (extent.z > extent[axis]) axis = 2;
  std::uint32_t mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return centroids_[a][axis] < centroids_[b][axis];
                   });

  std::uint32_t left = build(begin, mid);
  std::uint32_t right = build(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  nodes_[index].count = 0;
  return index;
}

double Bvh::box_distance2(const Node& n, const Vec3& q) const {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    double d = 0.0;
    if (q[k] < n.lo[k]) d = n.lo[k] - q[k];
    else if (q[k] > n.hi[k]) d = q[k] - n.hi[k];
    d2 += d * d;
  }
  return d2;
}

ClosestPointResult Bvh::closest_point(const Vec3& query) const {
  ClosestPointResult best;
  double best_d2 = std::numeric_limits<double>::max();

  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance2(node, query) >= best_d2) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.left; i < node.left + node.count; ++i) {
        std::uint32_t f = order_[i];
        TriangleClosest c =
            closest_point_on_triangle(query, tris_[f][0], tris_[f][1], tris_[f][2]);
        double d2 = norm2(c.point - query);
        if (d2 < best_d2) {
          best_d2 = d2;
          best.point = c.point;
          best.face_index = f;
        }
      }
    } else {
      // visit the nearer child first for tighter pruning
      double dl = box_distance2(nodes_[node.left], query);
      double dr = box_distance2(nodes_[node.right], query);
      std::uint32_t first = node.left, second = node.right;
      if (dr < dl) std::swap(first, second);
      stack[top++] = second;
      stack[top++] = first;
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

namespace {

bool ray_box_hit(const Vec3& lo, const Vec3& hi, const Vec3& origin, const Vec3& inv_dir,
                 double t_max) {
  double t0 = 0.0, t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    double ta = (lo[k] - origin[k]) * inv_dir[k];
    double tb = (hi[k] - origin[k]) * inv_dir[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

std::optional<RayHit> Bvh::ray_intersect(const Vec3& origin, const Vec3& direction,
                                         double bary_tolerance) const {
  Vec3 inv_dir(direction.x != 0.0 ? 1.0 / direction.x : std::numeric_limits<double>::infinity(),
               direction.y != 0.0 ? 1.0 / direction.y : std::numeric_limits<double>::infinity(),
               direction.z != 0.0 ? 1.0 / direction.z : std::numeric_limits<double>::infinity());

  std::optional<RayHit> best;
  double best_t = std::numeric_limits<double>::max();

  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!ray_box_hit(node.lo, node.hi, origin, inv_dir, best_t)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.left; i < node.left + node.count; ++i) {
        std::uint32_t f = order_[i];
        auto hit = ray_triangle_intersect(origin, direction, tris_[f][0], tris_[f][1], tris_[f][2],
                                          bary_tolerance);
        if (hit && hit->t < best_t) {
          best_t = hit->t;
          hit->face_index = f;
          best = hit;
        }
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
  return best;
}

}  // namespace hns
