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

#ifndef GANMM_LINALG_HPP
#define GANMM_LINALG_HPP

#include "ganmm/common.hpp"

namespace ganmm {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values[i]
  int sweeps = 0;
};

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Iterates until the off-diagonal Frobenius norm falls below
/// `tolerance` times the matrix norm, or `max_sweeps` sweeps have run.
/// Throws std::invalid_argument when `a` is not square or not symmetric to
/// within 1e-10 (relative to its largest entry).
SymmetricEigen symmetric_eig(const Matrix &a, double tolerance = 1e-10,
                             int max_sweeps = 100);

}  // namespace ganmm

#endif  // GANMM_LINALG_HPP
