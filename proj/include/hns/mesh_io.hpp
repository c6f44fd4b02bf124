// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hns/mesh.hpp"

namespace hns {

enum class MeshFormat {
  Obj,
  PlyAscii,
  PlyBinaryLittleEndian,
};

struct LoadStats {
  std::size_t dropped_degenerate_faces = 0;
  std::size_t triangulated_polygons = 0;
};

// Parses OBJ (`v`/`f` records, 1-based indices) or PLY (ascii and
// binary_little_endian). Non-triangle polygons are fan-triangulated; normals,
// UVs, and extra attributes are ignored. Degenerate faces (repeated indices or
// near-zero area) are dropped and counted in `stats`.
TriangleMesh load_mesh(std::span<const std::uint8_t> bytes, MeshFormat format,
                       LoadStats* stats = nullptr);

// Format inferred from extension / magic bytes.
TriangleMesh load_mesh_file(const std::string& path, LoadStats* stats = nullptr);

std::vector<std::uint8_t> write_mesh(const TriangleMesh& mesh, MeshFormat format);
void write_mesh_file(const TriangleMesh& mesh, const std::string& path,
                     MeshFormat format);

// .obj -> Obj, .ply -> PlyBinaryLittleEndian
MeshFormat format_for_path(const std::string& path);
void save_mesh_file(const TriangleMesh& mesh, const std::string& path);

}  // namespace hns
