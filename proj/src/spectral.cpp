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

#include "ganmm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ganmm {

namespace {

// Gaps closer than this are treated as ties.
constexpr double kGapTieTolerance = 1e-10;

}  // namespace

AffinityMatrix cosine_affinity(const Matrix &points) {
  const Index n = points.rows();
  Matrix unit = points;
  for (Index i = 0; i < n; ++i) {
    const double norm = points.row(i).norm();
    if (!(norm > 0.0))
      throw std::invalid_argument("segment " + std::to_string(i) +
                                  " has a zero-norm embedding");
    unit.row(i) /= norm;
  }
  AffinityMatrix a;
  a.values = unit * unit.transpose();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) {
      const double v =
          std::clamp(0.5 * (1.0 + 0.5 * (a.values(i, j) + a.values(j, i))),
                     0.0, 1.0);
      a.values(i, j) = a.values(j, i) = v;
    }
    a.values(i, i) = 1.0;
  }
  return a;
}

AffinityMatrix cosine_affinity(const EmbeddingStream &stream) {
  return cosine_affinity(stream.as_matrix());
}

Matrix normalized_laplacian(const AffinityMatrix &affinity) {
  const Matrix &a = affinity.values;
  const Index n = a.rows();
  const Vector degree = a.rowwise().sum();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    if (!(degree[i] > 0.0))
      throw std::invalid_argument("segment " + std::to_string(i) +
                                  " is isolated in the affinity graph");
    inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
  }
  Matrix l = -(inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return 0.5 * (l + l.transpose());
}

SymmetricEigen laplacian_decomposition(const AffinityMatrix &affinity) {
  return symmetric_eig(normalized_laplacian(affinity));
}

Vector laplacian_eigenvalues(const AffinityMatrix &affinity) {
  return laplacian_decomposition(affinity).values;
}

Matrix embed_rows(const SymmetricEigen &eig, int dim) {
  const Index n = eig.vectors.rows();
  if (dim < 1 || dim > n)
    throw std::invalid_argument("spectral dimension must lie in [1, n]");
  Matrix emb = eig.vectors.leftCols(dim);
  for (Index i = 0; i < n; ++i) {
    const double norm = emb.row(i).norm();
    if (norm > 0.0) emb.row(i) /= norm;
  }
  return emb;
}

Matrix spectral_embed(const AffinityMatrix &affinity, int dim) {
  if (dim < 1 || dim > affinity.size())
    throw std::invalid_argument("spectral dimension must lie in [1, n]");
  return embed_rows(laplacian_decomposition(affinity), dim);
}

int eigengap_count(const Vector &lambda, int max_speakers) {
  if (max_speakers < 2) throw std::invalid_argument("max_speakers must be >= 2");
  const Index n = lambda.size();
  if (n <= 2) return static_cast<int>(std::min<Index>(n, 2));
  const Index k_max = std::min<Index>(max_speakers, n - 1);
  int best_k = 2;
  double best_gap = lambda[2] - lambda[1];
  for (Index k = 3; k <= k_max; ++k) {
    const double gap = lambda[k] - lambda[k - 1];
    if (gap > best_gap + kGapTieTolerance) {
      best_gap = gap;
      best_k = static_cast<int>(k);
    }
  }
  return best_k;
}

int estimate_num_speakers(const AffinityMatrix &affinity, int max_speakers) {
  if (max_speakers < 2) throw std::invalid_argument("max_speakers must be >= 2");
  if (affinity.size() <= 2)
    return static_cast<int>(std::min<Index>(affinity.size(), 2));
  return eigengap_count(laplacian_eigenvalues(affinity), max_speakers);
}

}  // namespace ganmm
