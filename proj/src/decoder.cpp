// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hns/errors.hpp"
#include "hns/parallel.hpp"

namespace hns {

namespace {

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<Vec3> map_through_net(const Mlp& net, const std::vector<Vec3>& points, int workers) {
  Mlp::Matrix x(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = static_cast<float>(points[i].x);
    x(static_cast<Eigen::Index>(i), 1) = static_cast<float>(points[i].y);
    x(static_cast<Eigen::Index>(i), 2) = static_cast<float>(points[i].z);
  }
  Mlp::Matrix out = forward_chunked(net, x, workers);
  std::vector<Vec3> mapped(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Index r = static_cast<Eigen::Index>(i);
    mapped[i] = {static_cast<double>(out(r, 0)), static_cast<double>(out(r, 1)),
                 static_cast<double>(out(r, 2))};
  }
  return mapped;
}

}  // namespace

Icosphere adaptive_refine(const Icosphere& sphere, const BatchPointMap& coarse_map,
                          double ratio_threshold, int max_rounds) {
  Icosphere current = sphere;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Vec3> image = coarse_map(current.mesh.vertices);
    std::size_t n = current.mesh.faces.size();
    std::vector<double> areas(n);
    for (std::uint32_t f = 0; f < n; ++f) {
      const Face& face = current.mesh.faces[f];
      areas[f] = triangle_area(image[face[0]], image[face[1]], image[face[2]]);
    }
    std::vector<double> sorted = areas;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
    double median = sorted[n / 2];
    if (!(median > 0.0)) break;

    std::unordered_set<std::uint64_t> split_edges;
    bool any = false;
    for (std::uint32_t f = 0; f < n; ++f) {
      if (areas[f] > ratio_threshold * median) {
        const Face& face = current.mesh.faces[f];
        split_edges.insert(edge_key(face[0], face[1]));
        split_edges.insert(edge_key(face[1], face[2]));
        split_edges.insert(edge_key(face[2], face[0]));
        any = true;
      }
    }
    if (!any) break;

    // closure: a face with two split edges is split fully, which may cascade
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Face& face : current.mesh.faces) {
        int marked = static_cast<int>(split_edges.count(edge_key(face[0], face[1]))) +
                     static_cast<int>(split_edges.count(edge_key(face[1], face[2]))) +
                     static_cast<int>(split_edges.count(edge_key(face[2], face[0])));
        if (marked == 2) {
          split_edges.insert(edge_key(face[0], face[1]));
          split_edges.insert(edge_key(face[1], face[2]));
          split_edges.insert(edge_key(face[2], face[0]));
          changed = true;
        }
      }
    }

    Icosphere next;
    next.level = current.level;
    next.mesh.vertices = current.mesh.vertices;
    std::unordered_map<std::uint64_t, std::uint32_t> midpoint_index;
    midpoint_index.reserve(split_edges.size());
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
      auto [it, inserted] = midpoint_index.try_emplace(edge_key(a, b), 0u);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(next.mesh.vertices.size());
        next.mesh.vertices.push_back(
            normalized((next.mesh.vertices[a] + next.mesh.vertices[b]) * 0.5));
      }
      return it->second;
    };

    for (std::uint32_t f = 0; f < n; ++f) {
      const Face face = current.mesh.faces[f];
      std::uint32_t ancestor = current.face_ancestor[f];
      bool e01 = split_edges.count(edge_key(face[0], face[1])) > 0;
      bool e12 = split_edges.count(edge_key(face[1], face[2])) > 0;
      bool e20 = split_edges.count(edge_key(face[2], face[0])) > 0;
      int marked = static_cast<int>(e01) + static_cast<int>(e12) + static_cast<int>(e20);
      auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        next.mesh.faces.push_back({a, b, c});
        next.face_ancestor.push_back(ancestor);
      };
      if (marked == 3) {
        std::uint32_t ab = midpoint(face[0], face[1]);
        std::uint32_t bc = midpoint(face[1], face[2]);
        std::uint32_t ca = midpoint(face[2], face[0]);
        emit(face[0], ab, ca);
        emit(ab, face[1], bc);
        emit(ca, bc, face[2]);
        emit(ab, bc, ca);
      } else if (marked == 1) {
        int e = e01 ? 0 : (e12 ? 1 : 2);
        std::uint32_t a = face[e];
        std::uint32_t b = face[(e + 1) % 3];
        std::uint32_t c = face[(e + 2) % 3];
        std::uint32_t m = midpoint(a, b);
        emit(a, m, c);
        emit(m, b, c);
      } else {
        emit(face[0], face[1], face[2]);
      }
    }
    current = std::move(next);
  }
  return current;
}

Icosphere adaptive_refine(const Icosphere& sphere, const Mlp& coarse_net, double ratio_threshold,
                          int max_rounds, int workers) {
  return adaptive_refine(
      sphere,
      [&coarse_net, workers](const std::vector<Vec3>& pts) {
        return map_through_net(coarse_net, pts, workers);
      },
      ratio_threshold, max_rounds);
}

TriangleMesh decode(const CompressedModel& model, const DecodeOptions& options) {
  Mlp coarse_net = model.coarse_mlp();
  Icosphere sphere = make_icosphere(options.level);
  if (options.adaptive) {
    sphere = adaptive_refine(sphere, coarse_net, options.ratio_threshold, options.max_rounds,
                             options.workers);
  }

  std::size_t n = sphere.mesh.vertices.size();
  Mlp::Matrix x(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& v = sphere.mesh.vertices[i];
    Eigen::Index r = static_cast<Eigen::Index>(i);
    x(r, 0) = static_cast<float>(v.x);
    x(r, 1) = static_cast<float>(v.y);
    x(r, 2) = static_cast<float>(v.z);
  }
  Mlp::Matrix positions = forward_chunked(coarse_net, x, options.workers);

  if (options.apply_displacement) {
    Mlp fine_net = model.fine_mlp();
    Mlp::Matrix encoded =
        positional_encode_batch<float>(positions, fine_net.architecture().positional_levels);
    positions += forward_chunked(fine_net, encoded, options.workers);
  }

  TriangleMesh out;
  out.faces = sphere.mesh.faces;
  out.vertices.resize(n);
  Vec3 offset(model.offset[0], model.offset[1], model.offset[2]);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index r = static_cast<Eigen::Index>(i);
    Vec3 p(positions(r, 0), positions(r, 1), positions(r, 2));
    out.vertices[i] = p * static_cast<double>(model.scale) + offset;
  }
  return out;
}

}  // namespace hns
