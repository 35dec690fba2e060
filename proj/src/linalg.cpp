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

#include "ganmm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ganmm {

namespace {

double off_diagonal_norm(const Matrix &a) {
  double s = 0.0;
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen symmetric_eig(const Matrix &input, double tolerance,
                             int max_sweeps) {
  if (input.rows() != input.cols())
    throw std::invalid_argument("symmetric_eig: matrix is not square");
  if (!input.allFinite())
    throw std::invalid_argument("symmetric_eig: non-finite entry");
  const Index n = input.rows();
  const double scale = n > 0 ? input.cwiseAbs().maxCoeff() : 0.0;
  if (n > 0 && (input - input.transpose()).cwiseAbs().maxCoeff() >
                   1e-10 * std::max(scale, 1.0))
    throw std::invalid_argument("symmetric_eig: matrix is not symmetric");

  // Work on the symmetrized copy so rounding asymmetry cannot accumulate.
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double norm = a.norm();

  SymmetricEigen out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tolerance * norm) break;
    ++out.sweeps;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip rotations that cannot change the diagonal at working
        // precision.
        if (std::abs(apq) < 1e-300 ||
            (std::abs(apq) * 1e18 < std::abs(app) &&
             std::abs(apq) * 1e18 < std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // A <- J^T A J, touching only rows/columns p and q.
        double *colp = a.col(p).data();
        double *colq = a.col(q).data();
        for (Index k = 0; k < n; ++k) {
          const double akp = colp[k];
          const double akq = colq[k];
          colp[k] = c * akp - s * akq;
          colq[k] = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          a(p, k) = colp[k];
          a(q, k) = colq[k];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;

        double *vp = v.col(p).data();
        double *vq = v.col(q).data();
        for (Index k = 0; k < n; ++k) {
          const double vkp = vp[k];
          const double vkq = vq[k];
          vp[k] = c * vkp - s * vkq;
          vq[k] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace ganmm
