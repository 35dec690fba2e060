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

#include "ganmm/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace ganmm {

namespace {

struct RunResult {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

Matrix plus_plus_seed(const Matrix &x, int k, std::mt19937_64 &rng) {
  const Index n = x.rows();
  Matrix c(k, x.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  c.row(0) = x.row(pick(rng));
  Vector d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

// Nearest centroid per point, ties to the lower index. Returns inertia.
double assign(const Matrix &x, const Matrix &c, std::vector<int> &labels,
              Vector &dist) {
  double inertia = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < c.rows(); ++j) {
      const double d = (x.row(i) - c.row(j)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

RunResult lloyd(const Matrix &x, int k, std::uint64_t seed, int max_iter) {
  std::mt19937_64 rng(seed);
  RunResult run;
  run.centroids = plus_plus_seed(x, k, rng);
  const Index n = x.rows();
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> next(static_cast<std::size_t>(n));
  Vector dist(n);

  run.inertia = assign(x, run.centroids, next, dist);
  run.trace.push_back(run.inertia);
  while (run.iterations < max_iter) {
    ++run.iterations;
    const bool changed = next != run.labels;
    run.labels = next;
    if (!changed) break;

    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int l = run.labels[static_cast<std::size_t>(i)];
      sums.row(l) += x.row(i);
      ++counts[static_cast<std::size_t>(l)];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        run.centroids.row(j) =
            sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
        continue;
      }
      // Re-seed with the point farthest from its own centroid.
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const double d =
            (x.row(i) - run.centroids.row(run.labels[static_cast<std::size_t>(i)]))
                .squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      run.centroids.row(j) = x.row(far);
    }
    run.inertia = assign(x, run.centroids, next, dist);
    run.trace.push_back(run.inertia);
  }
  run.labels = next;
  return run;
}

void check_args(const Matrix &points, int k) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > points.rows())
    throw std::invalid_argument("kmeans: k exceeds the number of points");
  if (!points.allFinite())
    throw std::invalid_argument("kmeans: non-finite input");
}

}  // namespace

KmeansResult kmeans(const Matrix &points, int k, const KmeansOptions &opts) {
  check_args(points, k);
  if (opts.restarts < 1)
    throw std::invalid_argument("kmeans: restarts must be >= 1");

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opts.restarts));
  {
    std::mt19937_64 master(opts.seed);
    for (auto &s : seeds) s = master();
  }
  for (int r = 0; r < opts.restarts; ++r) {
    RunResult run =
        lloyd(points, k, seeds[static_cast<std::size_t>(r)], opts.max_iterations);
    if (run.inertia < best.inertia) {
      best.labels = std::move(run.labels);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.iterations = run.iterations;
      best.restart = r;
    }
  }
  // Final centroids are the means of the final assignment.
  best.empty.assign(static_cast<std::size_t>(k), true);
  Matrix sums = Matrix::Zero(k, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int l = best.labels[static_cast<std::size_t>(i)];
    sums.row(l) += points.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  best.inertia = 0.0;
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] == 0) continue;
    best.empty[static_cast<std::size_t>(j)] = false;
    best.centroids.row(j) =
        sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < points.rows(); ++i)
    best.inertia +=
        (points.row(i) - best.centroids.row(best.labels[static_cast<std::size_t>(i)]))
            .squaredNorm();
  return best;
}

std::vector<double> kmeans_inertia_trace(const Matrix &points, int k,
                                         std::uint64_t seed,
                                         int max_iterations) {
  check_args(points, k);
  return lloyd(points, k, seed, max_iterations).trace;
}

}  // namespace ganmm
