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


// Independent reference implementations used only by the tests. Each one is
// deliberately naive: straight loops, millisecond ticks, full enumeration.

#ifndef GANMM_TESTS_ORACLES_HPP
#define GANMM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ganmm/io.hpp"
#include "ganmm/nn.hpp"

namespace oracle {

using ganmm::Index;
using ganmm::Matrix;

inline Matrix naive_forward(const ganmm::Mlp &net, const Matrix &x) {
  const auto &p = net.params;
  const Index n = x.rows(), h = p.w1.rows(), o = p.w2.rows();
  Matrix out(n, o);
  for (Index r = 0; r < n; ++r) {
    std::vector<double> hid(static_cast<std::size_t>(h));
    for (Index j = 0; j < h; ++j) {
      double s = p.b1(j);
      for (Index k = 0; k < x.cols(); ++k) s += p.w1(j, k) * x(r, k);
      hid[static_cast<std::size_t>(j)] = s > 0.0 ? s : 0.0;
    }
    std::vector<double> z(static_cast<std::size_t>(o));
    for (Index j = 0; j < o; ++j) {
      double s = p.b2(j);
      for (Index k = 0; k < h; ++k) s += p.w2(j, k) * hid[static_cast<std::size_t>(k)];
      z[static_cast<std::size_t>(j)] = s;
    }
    if (net.output == ganmm::OutputActivation::kSoftmax) {
      double mx = *std::max_element(z.begin(), z.end()), tot = 0.0;
      for (double &v : z) tot += (v = std::exp(v - mx));
      for (double &v : z) v /= tot;
    }
    for (Index j = 0; j < o; ++j) out(r, j) = z[static_cast<std::size_t>(j)];
  }
  return out;
}

// Parameter entries in w1, b1, w2, b2 order.
inline std::vector<double *> entries(ganmm::MlpParams &p) {
  std::vector<double *> out;
  for (Index i = 0; i < p.w1.size(); ++i) out.push_back(p.w1.data() + i);
  for (Index i = 0; i < p.b1.size(); ++i) out.push_back(p.b1.data() + i);
  for (Index i = 0; i < p.w2.size(); ++i) out.push_back(p.w2.data() + i);
  for (Index i = 0; i < p.b2.size(); ++i) out.push_back(p.b2.data() + i);
  return out;
}

inline std::vector<double> flatten(const ganmm::MlpParams &p) {
  ganmm::MlpParams copy = p;
  std::vector<double> out;
  for (double *e : entries(copy)) out.push_back(*e);
  return out;
}

// Central differences of `loss` with respect to every parameter of `net`.
inline std::vector<double> fd_gradient(ganmm::Mlp net,
                                       const std::function<double(const ganmm::Mlp &)> &loss,
                                       double step) {
  std::vector<double> g;
  for (double *e : entries(net.params)) {
    const double keep = *e;
    *e = keep + step;
    const double up = loss(net);
    *e = keep - step;
    const double down = loss(net);
    *e = keep;
    g.push_back((up - down) / (2.0 * step));
  }
  return g;
}

// ||a - b|| / max(||a||, ||b||), zero when both vanish.
inline double relative_error(const std::vector<double> &a, const std::vector<double> &b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double den = std::sqrt(std::max(na, nb));
  return den == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / den;
}

inline Matrix random_symmetric(int n, std::mt19937_64 &rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

struct DerCounts {
  std::int64_t miss = 0, false_alarm = 0, confusion = 0, scored = 0;
  double der() const {
    return static_cast<double>(miss + false_alarm + confusion) / static_cast<double>(scored);
  }
};

// Scores every 1 ms tick separately and tries every injective speaker map.
inline DerCounts brute_der(const std::vector<ganmm::Turn> &ref,
                           const std::vector<ganmm::Turn> &hyp, double collar,
                           bool score_overlap) {
  auto ms = [](double s) { return static_cast<std::int64_t>(std::llround(s * 1000.0)); };
  std::map<std::string, int> rid, hid;
  for (const auto &t : ref) rid.emplace(t.speaker, static_cast<int>(rid.size()));
  for (const auto &t : hyp) hid.emplace(t.speaker, static_cast<int>(hid.size()));
  std::int64_t end = 0;
  for (const auto &t : ref) end = std::max(end, ms(t.start + t.duration));
  for (const auto &t : hyp) end = std::max(end, ms(t.start + t.duration));
  const std::size_t ticks = static_cast<std::size_t>(end);
  const int nr = static_cast<int>(rid.size()), nh = static_cast<int>(hid.size());

  std::vector<std::vector<char>> on_r(nr, std::vector<char>(ticks, 0));
  std::vector<std::vector<char>> on_h(nh, std::vector<char>(ticks, 0));
  std::vector<char> excluded(ticks, 0);
  const std::int64_t c = ms(collar);
  for (const auto &t : ref) {
    const std::int64_t s = ms(t.start), e = ms(t.start + t.duration);
    for (std::int64_t k = s; k < e; ++k) on_r[rid[t.speaker]][static_cast<std::size_t>(k)] = 1;
    for (std::int64_t b : {s, e})
      for (std::int64_t k = std::max<std::int64_t>(0, b - c); k < std::min(end, b + c); ++k)
        excluded[static_cast<std::size_t>(k)] = 1;
  }
  for (const auto &t : hyp)
    for (std::int64_t k = ms(t.start); k < ms(t.start + t.duration); ++k)
      on_h[hid[t.speaker]][static_cast<std::size_t>(k)] = 1;

  DerCounts base;
  std::vector<std::vector<std::int64_t>> both(nh, std::vector<std::int64_t>(nr, 0));
  for (std::size_t k = 0; k < ticks; ++k) {
    if (excluded[k]) continue;
    int r = 0, h = 0;
    for (int i = 0; i < nr; ++i) r += on_r[i][k];
    for (int i = 0; i < nh; ++i) h += on_h[i][k];
    if (r > 1 && !score_overlap) continue;
    base.scored += r;
    base.miss += std::max(0, r - h);
    base.false_alarm += std::max(0, h - r);
    base.confusion += std::min(r, h);
    for (int a = 0; a < nh; ++a)
      if (on_h[a][k])
        for (int b = 0; b < nr; ++b) both[a][b] += on_r[b][k];
  }

  // Every injective partial map hyp -> ref, by recursion.
  std::int64_t best = 0;
  std::vector<char> taken(static_cast<std::size_t>(nr), 0);
  std::function<void(int, std::int64_t)> go = [&](int a, std::int64_t acc) {
    if (a == nh) {
      best = std::max(best, acc);
      return;
    }
    go(a + 1, acc);
    for (int b = 0; b < nr; ++b)
      if (!taken[static_cast<std::size_t>(b)]) {
        taken[static_cast<std::size_t>(b)] = 1;
        go(a + 1, acc + both[a][b]);
        taken[static_cast<std::size_t>(b)] = 0;
      }
  };
  go(0, 0);
  base.confusion -= best;
  return base;
}

// Lower median over a centered window truncated at the edges of each run of
// non-negative labels.
inline std::vector<int> naive_median(const std::vector<int> &x, int kernel) {
  std::vector<int> out = x;
  const int half = kernel / 2, n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    if (x[i] < 0) continue;
    int lo = i, hi = i;
    while (lo > 0 && x[lo - 1] >= 0) --lo;
    while (hi + 1 < n && x[hi + 1] >= 0) ++hi;
    std::vector<int> w(x.begin() + std::max(lo, i - half),
                       x.begin() + std::min(hi, i + half) + 1);
    std::sort(w.begin(), w.end());
    out[i] = w[(w.size() - 1) / 2];
  }
  return out;
}

// Minimum inertia over every split of the rows into two non-empty groups.
inline double best_two_partition_inertia(const Matrix &pts, std::vector<int> *labels = nullptr) {
  const int n = static_cast<int>(pts.rows());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(pts.cols());
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (static_cast<int>((mask >> i) & 1u) == side) mean += pts.row(i), ++count;
      mean /= count;
      for (int i = 0; i < n; ++i)
        if (static_cast<int>((mask >> i) & 1u) == side) total += (pts.row(i) - mean).squaredNorm();
    }
    if (total < best) {
      best = total;
      if (labels) {
        labels->assign(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) (*labels)[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      }
    }
  }
  return best;
}

// Fraction of points labelled correctly under the best relabelling.
inline double best_permutation_accuracy(const std::vector<int> &truth,
                                        const std::vector<int> &pred, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (pred[i] >= 0 && pred[i] < k && perm[static_cast<std::size_t>(pred[i])] == truth[i]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

// Random reference/hypothesis pair on a millisecond grid.
struct RandomSession {
  std::vector<ganmm::Turn> ref, hyp;
};

inline RandomSession random_session(std::mt19937_64 &rng, int max_speakers, int max_turns,
                                    bool allow_ref_overlap) {
  std::uniform_int_distribution<int> n_ref(1, max_speakers), n_hyp(1, max_speakers);
  std::uniform_int_distribution<int> n_turns(1, max_turns);
  std::uniform_int_distribution<int> dur(1, 6000), gap(0, 1500), back(0, 2000);
  std::bernoulli_distribution overlap(0.2);
  RandomSession s;
  auto build = [&](int speakers, const char *prefix, bool can_overlap) {
    std::vector<ganmm::Turn> out;
    const int count = n_turns(rng);
    std::uniform_int_distribution<int> who(0, speakers - 1);
    std::int64_t t = 0;
    for (int i = 0; i < count; ++i) {
      std::int64_t start = t + gap(rng);
      if (can_overlap && overlap(rng) && !out.empty())
        start = std::max<std::int64_t>(0, t - back(rng));
      const std::int64_t d = dur(rng);
      out.push_back({start / 1000.0, d / 1000.0, prefix + std::to_string(who(rng))});
      t = std::max(t, start + d);
    }
    return out;
  };
  s.ref = build(n_ref(rng), "R", allow_ref_overlap);
  s.hyp = build(n_hyp(rng), "H", true);
  return s;
}

}  // namespace oracle

#endif  // GANMM_TESTS_ORACLES_HPP
