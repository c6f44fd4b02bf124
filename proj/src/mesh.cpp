// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/mesh.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "hns/errors.hpp"
#include "hns/rng.hpp"

namespace hns {

double TriangleMesh::total_area() const {
  double area = 0.0;
  for (std::uint32_t f = 0; f < faces.size(); ++f) area += face_area(f);
  return area;
}

void TriangleMesh::bounding_box(Vec3* lo, Vec3* hi) const {
  Vec3 mn(std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max());
  Vec3 mx = -mn;
  for (const Vec3& v : vertices) {
    for (int i = 0; i < 3; ++i) {
      mn[i] = std::min(mn[i], v[i]);
      mx[i] = std::max(mx[i], v[i]);
    }
  }
  *lo = mn;
  *hi = mx;
}

double TriangleMesh::bounding_box_diagonal() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo, hi;
  bounding_box(&lo, &hi);
  return norm(hi - lo);
}

namespace {

// undirected edge key
inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct EdgeInfo {
  int count = 0;
  int forward = 0;  // directed occurrences with lower index first
};

}  // namespace

TopologyReport validate_topology(const TriangleMesh& mesh) {
  TopologyReport report;
  std::unordered_map<std::uint64_t, EdgeInfo> edges;
  edges.reserve(mesh.faces.size() * 3);
  for (const Face& f : mesh.faces) {
    for (int i = 0; i < 3; ++i) {
      std::uint32_t a = f[i];
      std::uint32_t b = f[(i + 1) % 3];
      EdgeInfo& e = edges[edge_key(a, b)];
      ++e.count;
      if (a < b) ++e.forward;
    }
  }

  report.edge_count = edges.size();
  bool watertight = !mesh.faces.empty();
  bool oriented = true;
  for (const auto& [key, e] : edges) {
    if (e.count == 1) ++report.boundary_edge_count;
    if (e.count != 2) watertight = false;
    if (e.count > 2) ++report.nonmanifold_edge_count;
    // consistent orientation: the two incident faces traverse the edge in
    // opposite directions
    if (e.count == 2 && e.forward != 1) oriented = false;
    if (e.count == 1 && e.forward > 1) oriented = false;
  }
  report.is_watertight = watertight;
  report.orientation_consistent = oriented;
  report.euler_characteristic = static_cast<int>(mesh.vertices.size()) -
                                static_cast<int>(edges.size()) +
                                static_cast<int>(mesh.faces.size());
  if (watertight) report.genus = (2 - report.euler_characteristic) / 2;
  return report;
}

NormalizeResult normalize_mesh(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw InvalidArgumentError("normalize_mesh: empty mesh");
  Vec3 lo, hi;
  mesh.bounding_box(&lo, &hi);
  double diag = norm(hi - lo);
  if (diag <= 0.0) {
    throw InvalidArgumentError("normalize_mesh: degenerate bounding box (all points identical)");
  }
  NormalizeResult result;
  result.scale = diag;
  result.offset = (lo + hi) * 0.5;
  result.mesh.faces = mesh.faces;
  result.mesh.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    result.mesh.vertices.push_back((v - result.offset) / diag);
  }
  return result;
}

TriangleMesh denormalize_mesh(const TriangleMesh& mesh, double scale, const Vec3& offset) {
  TriangleMesh out;
  out.faces = mesh.faces;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back(v * scale + offset);
  return out;
}

std::array<double, 3> uniform_barycentric(double r1, double r2) {
  double s = std::sqrt(r1);
  return {1.0 - s, s * (1.0 - r2), s * r2};
}

SurfaceSampler::SurfaceSampler(const TriangleMesh& mesh) : mesh_(&mesh) {
  if (mesh.faces.empty()) throw InvalidArgumentError("SurfaceSampler: mesh has no faces");
  cdf_.resize(mesh.faces.size());
  double acc = 0.0;
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    acc += mesh.face_area(f);
    cdf_[f] = acc;
  }
  total_area_ = acc;
  if (!(acc > 0.0)) throw InvalidArgumentError("SurfaceSampler: zero total surface area");
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint32_t SurfaceSampler::face_at(std::uint64_t seed, std::uint64_t index) const {
  Rng rng(seed, index);
  double u = rng.next_double();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

SurfaceSample SurfaceSampler::sample_at(std::uint64_t seed, std::uint64_t index) const {
  Rng rng(seed, index);
  double u = rng.next_double();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  SurfaceSample s;
  s.face_index = static_cast<std::uint32_t>(it - cdf_.begin());
  s.barycentric = uniform_barycentric(rng.next_double(), rng.next_double());
  s.position = barycentric_point(*mesh_, s.face_index, s.barycentric);
  return s;
}

std::vector<SurfaceSample> sample_surface_uniform(const TriangleMesh& mesh, std::size_t n,
                                                  std::uint64_t seed) {
  if (n == 0) throw InvalidArgumentError("sample_surface_uniform: n must be >= 1");
  SurfaceSampler sampler(mesh);
  std::vector<SurfaceSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = sampler.sample_at(seed, i);
  return samples;
}

std::vector<std::vector<std::uint32_t>> vertex_adjacency(const TriangleMesh& mesh) {
  std::vector<std::vector<std::uint32_t>> adj(mesh.vertices.size());
  for (const Face& f : mesh.faces) {
    for (int i = 0; i < 3; ++i) {
      std::uint32_t a = f[i];
      std::uint32_t b = f[(i + 1) % 3];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  for (auto& ring : adj) {
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  }
  return adj;
}

}  // namespace hns
