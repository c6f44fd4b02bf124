// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>

#include "hns/bvh.hpp"
#include "hns/mesh.hpp"

namespace hns::test {

// Watertight torus from a glued major x minor grid.
TriangleMesh make_torus(int major_segments = 8, int minor_segments = 8, double major_radius = 2.0,
                        double minor_radius = 0.5);

// Radial graph over an icosphere: vertex direction d becomes d * radius(u, v)
// with u azimuth and v polar of d. The icosphere itself is the exact
// spherical parameterization of the result.
TriangleMesh make_radial_mesh(int level, const std::function<double(double, double)>& radius);

// r = 1 + 0.2 sin(3u) sin^2(v)
TriangleMesh make_star_mesh(int level = 4);

// r = 1 + 0.2 sin(3u) sin^2(v) + 0.05 sin(11u) sin^4(v)
TriangleMesh make_bumpy_mesh(int level = 6);

// Unit icosphere with deterministic radial noise, still star-shaped.
TriangleMesh make_noisy_icosphere(int level, double amplitude, std::uint64_t seed);

// Polar reparameterization v -> v(a + (1-a) v/pi); a=1/3 compresses the north
// cap 3x linearly while staying bijective on the sphere.
Vec3 compress_north_cap(const Vec3& unit_dir, double a = 1.0 / 3.0);

// Independent oracles (different algorithms than the library paths).
double brute_force_closest_distance(const TriangleMesh& mesh, const Vec3& query);
std::optional<RayHit> brute_force_ray_intersect(const TriangleMesh& mesh, const Vec3& origin,
                                                const Vec3& direction);

}  // namespace hns::test
