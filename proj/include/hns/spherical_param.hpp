// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "hns/bvh.hpp"
#include "hns/mesh.hpp"

namespace hns {

// Original mesh, its spherical embedding, and its smoothed coarse version.
// All three share the same face list, so barycentric coordinates transfer
// directly between them.
struct ParameterizedShape {
  TriangleMesh original;
  TriangleMesh sphere;
  TriangleMesh coarse;
};

enum class CorrespondTarget { Original, Coarse };

Vec3 correspond(const ParameterizedShape& shape, CorrespondTarget target, std::uint32_t face,
                const std::array<double, 3>& barycentric);

struct BijectivityReport {
  bool ok = false;
  std::vector<std::uint32_t> flipped_faces;
  bool origin_inside = false;
};

// A spherical face is flipped when the sign of det[v0 v1 v2] disagrees with
// the mesh majority. Origin containment is established by winding number.
BijectivityReport check_bijectivity(const TriangleMesh& sphere);

struct ParameterizeOptions {
  int max_iterations = 2000;
  double step_size = 0.5;    // umbrella step length, adapted by backtracking
  double tolerance = 1e-9;   // stall threshold on max vertex movement
};

// Smooth-and-project spherical embedding for watertight genus-0 meshes.
// Vertices are normalized about the centroid, then relaxed toward their
// one-ring means and re-projected to the unit sphere until no face is
// flipped. Throws ParameterizationError (with the residual flipped-face
// count) if no fold-free embedding is reached.
TriangleMesh spherical_parameterize(const TriangleMesh& mesh,
                                    const ParameterizeOptions& opts = {});

// Accepts an externally computed spherical embedding with the same
// connectivity as `mesh`, normalizing vertices and verifying bijectivity.
TriangleMesh import_parameterization(const TriangleMesh& mesh,
                                     const TriangleMesh& sphere_candidate);

// Uniform (umbrella) Laplacian smoothing: c rounds of moving every vertex
// toward its one-ring mean by factor lambda. Connectivity is unchanged.
TriangleMesh laplacian_smooth(const TriangleMesh& mesh, int iterations, double lambda);

struct LocateResult {
  std::uint32_t face_index = 0;
  std::array<double, 3> barycentric{};
};

// Maps unit directions to (face, barycentric) on a bijective sphere mesh by
// casting the origin ray. Read-only after construction; safe for concurrent
// callers.
class SphereLocator {
 public:
  explicit SphereLocator(const TriangleMesh& sphere);

  LocateResult locate(const Vec3& direction) const;
  const TriangleMesh& sphere() const { return sphere_; }

 private:
  TriangleMesh sphere_;
  Bvh bvh_;
};

ParameterizedShape make_parameterized_shape(TriangleMesh original, TriangleMesh sphere,
                                            TriangleMesh coarse);

}  // namespace hns
