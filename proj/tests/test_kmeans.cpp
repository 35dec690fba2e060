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


#include <algorithm>
#include <random>

#include "doctest.h"
#include "ganmm/kmeans.hpp"
#include "oracles.hpp"

using namespace ganmm;

namespace {

Matrix clouds(const std::vector<Vector> &centers, int per, double radius,
              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  const Index d = centers[0].size();
  Matrix x(static_cast<Index>(centers.size()) * per, d);
  Index r = 0;
  for (const auto &c : centers)
    for (int i = 0; i < per; ++i, ++r)
      for (Index k = 0; k < d; ++k) x(r, k) = c[k] + u(rng);
  return x;
}

std::vector<std::vector<double>> sorted_rows(const Matrix &m) {
  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < m.rows(); ++i) {
    rows.emplace_back();
    for (Index k = 0; k < m.cols(); ++k) rows.back().push_back(m(i, k));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("single cluster is the mean") {
  Matrix x(4, 2);
  x << 0, 0, 2, 0, 2, 2, 0, 6;
  const auto r = kmeans(x, 1);
  CHECK(r.centroids(0, 0) == doctest::Approx(1.0));
  CHECK(r.centroids(0, 1) == doctest::Approx(2.0));
  CHECK(std::all_of(r.labels.begin(), r.labels.end(), [](int l) { return l == 0; }));
}

TEST_CASE("two far clouds match the exhaustive optimum") {
  Vector a(2), b(2);
  a << 0.0, 0.0;
  b << 10.0, 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix x = clouds({a, b}, 5, 0.1, seed);
    std::vector<int> best_labels;
    const double best = oracle::best_two_partition_inertia(x, &best_labels);
    const auto r = kmeans(x, 2, {10, 300, seed});
    CHECK(r.inertia == doctest::Approx(best).epsilon(1e-12));
    CHECK(oracle::best_permutation_accuracy(best_labels, r.labels, 2) == 1.0);
    for (int i = 0; i < 5; ++i) CHECK(r.labels[i] == r.labels[0]);
    for (int i = 5; i < 10; ++i) CHECK(r.labels[i] != r.labels[0]);
  }
}

TEST_CASE("random small sets reach the exhaustive optimum") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  int hits = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x(9, 2);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    const double best = oracle::best_two_partition_inertia(x);
    const auto r = kmeans(x, 2, {10, 300, static_cast<std::uint64_t>(rep)});
    CHECK(r.inertia >= best - 1e-12);
    hits += r.inertia <= best + 1e-9;
  }
  // Lloyd can stall in a local optimum; ten restarts almost never do here.
  CHECK(hits >= 18);
}

TEST_CASE("duplicating every point keeps the centroids") {
  Vector a(3), b(3), c(3);
  a << 0, 0, 0;
  b << 8, 0, 1;
  c << 0, 9, -3;
  const Matrix x = clouds({a, b, c}, 6, 0.5, 3);
  Matrix twice(2 * x.rows(), x.cols());
  twice << x, x;
  const auto r1 = kmeans(x, 3, {10, 300, 1});
  const auto r2 = kmeans(twice, 3, {10, 300, 2});
  const auto s1 = sorted_rows(r1.centroids), s2 = sorted_rows(r2.centroids);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(s1[i][k] == doctest::Approx(s2[i][k]));
}

TEST_CASE("inertia never increases across Lloyd iterations") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix x(60, 3);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    const auto trace = kmeans_inertia_trace(x, 4, seed, 300);
    REQUIRE(!trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
  }
}

TEST_CASE("deterministic in seed and restarts") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  Matrix x(50, 4);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  const auto a = kmeans(x, 3, {7, 300, 99});
  const auto b = kmeans(x, 3, {7, 300, 99});
  CHECK(a.labels == b.labels);
  CHECK(a.centroids == b.centroids);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("ties go to the lower centroid") {
  // Midpoint between two identical-size groups; k-means++ picks both groups.
  Matrix x(3, 1);
  x << -1.0, 1.0, 0.0;
  const auto r = kmeans(x, 2, {1, 300, 0});
  const int left = r.labels[0], right = r.labels[1];
  REQUIRE(left != right);
  if (r.centroids(left, 0) == -r.centroids(right, 0))
    CHECK(r.labels[2] == std::min(left, right));
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(kmeans(Matrix::Zero(2, 2), 3), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(Matrix::Zero(2, 2), 0), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(Matrix::Zero(2, 2), 1, {0, 300, 0}), std::invalid_argument);
}

TEST_CASE("duplicate points leave clusters empty") {
  const auto r = kmeans(Matrix::Ones(4, 2), 2, {3, 100, 0});
  CHECK(std::count(r.empty.begin(), r.empty.end(), true) == 1);
}

}  // TEST_SUITE
