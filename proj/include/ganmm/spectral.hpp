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

#ifndef GANMM_SPECTRAL_HPP
#define GANMM_SPECTRAL_HPP

#include "ganmm/common.hpp"
#include "ganmm/io.hpp"
#include "ganmm/linalg.hpp"

namespace ganmm {

/// Symmetric n x n matrix of pairwise affinities in [0, 1], unit diagonal.
struct AffinityMatrix {
  Matrix values;

  Index size() const { return values.rows(); }
};

/// a_ij = (1 + cos(x_i, x_j)) / 2 over the rows of `points`. Throws
/// std::invalid_argument naming the first zero-norm row.
AffinityMatrix cosine_affinity(const Matrix &points);
AffinityMatrix cosine_affinity(const EmbeddingStream &stream);

/// L = I - D^{-1/2} A D^{-1/2}. Throws on an isolated (zero-degree) node.
Matrix normalized_laplacian(const AffinityMatrix &affinity);

/// Laplacian eigenvalues in ascending order.
Vector laplacian_eigenvalues(const AffinityMatrix &affinity);

/// Eigen-decomposition of the normalized Laplacian.
SymmetricEigen laplacian_decomposition(const AffinityMatrix &affinity);

/// Unit-normalized rows of the first `dim` eigenvectors of `eig`.
Matrix embed_rows(const SymmetricEigen &eig, int dim);

/// Rows of the `dim` lowest Laplacian eigenvectors, each row scaled to unit
/// length (all-zero rows stay zero).
Matrix spectral_embed(const AffinityMatrix &affinity, int dim);

/// argmax_k (lambda_{k+1} - lambda_k) over k in [2, max_speakers], ties to
/// the smaller k. Sessions with n <= 2 segments return min(n, 2).
int estimate_num_speakers(const AffinityMatrix &affinity, int max_speakers);

/// Eigengap selection on precomputed ascending eigenvalues.
int eigengap_count(const Vector &ascending_eigenvalues, int max_speakers);

}  // namespace ganmm

#endif  // GANMM_SPECTRAL_HPP
