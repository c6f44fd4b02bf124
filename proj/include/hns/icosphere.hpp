// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hns/mesh.hpp"

namespace hns {

// Unit icosphere: icosahedron subdivided `level` times, new vertices projected
// to the sphere. Unrefined level k has 10*4^k + 2 vertices and 20*4^k faces.
struct Icosphere {
  TriangleMesh mesh;
  int level = 0;
  std::vector<std::uint32_t> face_ancestor;  // level-0 icosahedron face per face
};

TriangleMesh make_icosahedron();
Icosphere make_icosphere(int level);

}  // namespace hns
