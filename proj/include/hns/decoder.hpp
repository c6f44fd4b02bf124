// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "hns/container.hpp"
#include "hns/icosphere.hpp"

namespace hns {

// Maps a set of sphere vertices through the coarse surface map.
using BatchPointMap = std::function<std::vector<Vec3>(const std::vector<Vec3>&)>;

// Conforming red-green refinement: faces whose image area exceeds
// ratio_threshold x median are 1-to-4 split (new vertices re-projected to the
// sphere); neighbors with one split edge get a 1-to-2 split so the result
// stays watertight. Repeats until nothing is flagged or max_rounds.
Icosphere adaptive_refine(const Icosphere& sphere, const BatchPointMap& coarse_map,
                          double ratio_threshold = 4.0, int max_rounds = 3);

Icosphere adaptive_refine(const Icosphere& sphere, const Mlp& coarse_net,
                          double ratio_threshold = 4.0, int max_rounds = 3, int workers = 0);

struct DecodeOptions {
  int level = 6;
  bool adaptive = true;
  double ratio_threshold = 4.0;
  int max_rounds = 3;
  bool apply_displacement = true;  // off: coarse-only reconstruction
  int workers = 0;
};

TriangleMesh decode(const CompressedModel& model, const DecodeOptions& options = {});

}  // namespace hns
