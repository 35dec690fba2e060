// Copyright 2026 The ganmm-diar Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GANMM_KMEANS_HPP
#define GANMM_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "ganmm/common.hpp"

namespace ganmm {

struct KmeansResult {
  std::vector<int> labels;  // one per point, in [0, k)
  Matrix centroids;         // k x d
  double inertia = 0.0;     // sum of squared distances to assigned centroids
  int iterations = 0;       // Lloyd iterations of the winning restart
  int restart = 0;          // index of the winning restart
  std::vector<bool> empty;  // clusters left empty (only possible if k > #distinct points)
};

struct KmeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  std::uint64_t seed = 0;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` by inertia.
/// Assignment ties go to the lower centroid index; an empty cluster is
/// re-seeded with the point farthest from its current centroid.
KmeansResult kmeans(const Matrix &points, int k, const KmeansOptions &opts = {});

/// Inertia trace (one value per Lloyd iteration) of a single restart.
/// Exposed so the monotone-descent property can be checked.
std::vector<double> kmeans_inertia_trace(const Matrix &points, int k,
                                         std::uint64_t seed,
                                         int max_iterations = 300);

}  // namespace ganmm

#endif  // GANMM_KMEANS_HPP
