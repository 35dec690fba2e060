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


#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ganmm/linalg.hpp"
#include "oracles.hpp"

using namespace ganmm;

TEST_SUITE("linalg") {

TEST_CASE("identity") {
  const auto e = symmetric_eig(Matrix::Identity(4, 4));
  CHECK(e.values.isApproxToConstant(1.0, 0.0));
}

TEST_CASE("diagonal input sorts to axis vectors") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3.0, 1.0, 2.0;
  const auto e = symmetric_eig(a);
  CHECK(e.values(0) == 1.0);
  CHECK(e.values(1) == 2.0);
  CHECK(e.values(2) == 3.0);
  CHECK(std::abs(e.vectors(1, 0)) == 1.0);
  CHECK(std::abs(e.vectors(2, 1)) == 1.0);
  CHECK(std::abs(e.vectors(0, 2)) == 1.0);
}

TEST_CASE("2x2 closed form") {
  Matrix a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const auto e = symmetric_eig(a);
  CHECK(e.values(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("random 6x6 reconstruction, orthonormality, trace") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = oracle::random_symmetric(6, rng);
    const auto e = symmetric_eig(a);
    const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rec - a).norm() < 1e-8);
    CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(6, 6)).norm() < 1e-8);
    CHECK(e.values.sum() == doctest::Approx(a.trace()).epsilon(1e-8).scale(1.0));
    for (int i = 1; i < 6; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("agrees with Eigen's own solver") {
  std::mt19937_64 rng(8);
  const Matrix a = oracle::random_symmetric(12, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
  CHECK((symmetric_eig(a).values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("repeated eigenvalues") {
  Matrix a = Matrix::Constant(5, 5, 1.0);  // eigenvalues 0,0,0,0,5
  const auto e = symmetric_eig(a);
  CHECK(std::abs(e.values(0)) < 1e-12);
  CHECK(e.values(4) == doctest::Approx(5.0));
  const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  CHECK((rec - a).norm() < 1e-10);
}

TEST_CASE("input validation") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 3.0, 1.0;
  CHECK_THROWS_AS(symmetric_eig(a), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_eig(Matrix::Zero(2, 3)), std::invalid_argument);
  a << 1.0, NAN, NAN, 1.0;
  CHECK_THROWS_AS(symmetric_eig(a), std::invalid_argument);
  CHECK(symmetric_eig(Matrix(0, 0)).values.size() == 0);
}

}  // TEST_SUITE
