// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/icosphere.hpp"

#include <unordered_map>

#include "hns/errors.hpp"

namespace hns {

TriangleMesh make_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {
      {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1},
  };
  for (Vec3& v : mesh.vertices) v = normalized(v);
  mesh.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return mesh;
}

namespace {

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Icosphere make_icosphere(int level) {
  if (level < 0) throw InvalidArgumentError("make_icosphere: level must be >= 0");
  Icosphere ico;
  ico.mesh = make_icosahedron();
  ico.level = level;
  ico.face_ancestor.resize(ico.mesh.faces.size());
  for (std::uint32_t f = 0; f < ico.face_ancestor.size(); ++f) ico.face_ancestor[f] = f;

  for (int round = 0; round < level; ++round) {
    std::unordered_map<std::uint64_t, std::uint32_t> midpoints;
    midpoints.reserve(ico.mesh.faces.size() * 3 / 2);
    std::vector<Face> faces;
    faces.reserve(ico.mesh.faces.size() * 4);
    std::vector<std::uint32_t> ancestors;
    ancestors.reserve(ico.mesh.faces.size() * 4);

    auto midpoint = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
      auto [it, inserted] = midpoints.try_emplace(edge_key(a, b), 0u);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(ico.mesh.vertices.size());
        ico.mesh.vertices.push_back(
            normalized((ico.mesh.vertices[a] + ico.mesh.vertices[b]) * 0.5));
      }
      return it->second;
    };

    for (std::uint32_t f = 0; f < ico.mesh.faces.size(); ++f) {
      const Face face = ico.mesh.faces[f];
      std::uint32_t ab = midpoint(face[0], face[1]);
      std::uint32_t bc = midpoint(face[1], face[2]);
      std::uint32_t ca = midpoint(face[2], face[0]);
      std::uint32_t ancestor = ico.face_ancestor[f];
      faces.push_back({face[0], ab, ca});
      faces.push_back({ab, face[1], bc});
      faces.push_back({ca, bc, face[2]});
      faces.push_back({ab, bc, ca});
      for (int k = 0; k < 4; ++k) ancestors.push_back(ancestor);
    }
    ico.mesh.faces = std::move(faces);
    ico.face_ancestor = std::move(ancestors);
  }
  return ico;
}

}  // namespace hns
