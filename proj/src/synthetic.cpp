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

#include "ganmm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ganmm {

namespace {

double round_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

// Columns are orthonormal directions, one per speaker.
Matrix orthonormal_columns(int dim, int count, std::mt19937_64 &rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix q(dim, count);
  for (int c = 0; c < count; ++c) {
    for (;;) {
      Vector v(dim);
      for (int r = 0; r < dim; ++r) v[r] = gauss(rng);
      for (int p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
      for (int p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
      const double norm = v.norm();
      if (norm > 1e-6) {
        q.col(c) = v / norm;
        break;
      }
    }
  }
  return q;
}

}  // namespace

void SynthSpec::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw std::invalid_argument(std::string("SynthSpec: ") + what);
  };
  require(n_speakers >= 2, "n_speakers must be >= 2");
  require(session_span > 0.0, "session_span must be > 0");
  require(embedding_dim >= n_speakers, "embedding_dim must be >= n_speakers");
  require(speaker_separation > 0.0, "speaker_separation must be > 0");
  require(mean_turn > 0.0, "mean_turn must be > 0");
  require(!minority_fraction ||
              (*minority_fraction > 0.0 && *minority_fraction < 1.0),
          "minority_fraction must lie in (0, 1)");
  require(pause_probability >= 0.0 && pause_probability <= 1.0,
          "pause_probability must lie in [0, 1]");
  require(mean_pause > 0.0, "mean_pause must be > 0");
  require(window > 0.0 && hop > 0.0 && hop <= window,
          "window/hop must satisfy 0 < hop <= window");
}

SynthSession generate_session(const SynthSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int n = spec.n_speakers;
  const int minority = spec.minority_fraction ? n - 1 : -1;

  SynthSession out;
  for (int s = 0; s < n; ++s) out.speaker_names.push_back("S" + std::to_string(s + 1));

  // Turn sequence.
  std::exponential_distribution<double> turn_len(1.0 / spec.mean_turn);
  std::exponential_distribution<double> pause_len(1.0 / spec.mean_pause);
  std::bernoulli_distribution pause(spec.pause_probability);
  double minority_budget =
      spec.minority_fraction ? 0.9 * *spec.minority_fraction * spec.session_span
                             : 0.0;
  const double minority_weight =
      spec.minority_fraction
          ? *spec.minority_fraction / (1.0 - *spec.minority_fraction) * (n - 1)
          : 1.0;
  constexpr double kMinTurn = 0.05;

  std::vector<int> turn_speaker;
  double t = 0.0;
  int prev = -1;
  while (t < spec.session_span - kMinTurn) {
    std::vector<double> weights(static_cast<std::size_t>(n), 1.0);
    if (minority >= 0)
      weights[static_cast<std::size_t>(minority)] =
          minority_budget >= 0.2 ? minority_weight : 0.0;
    if (prev >= 0) weights[static_cast<std::size_t>(prev)] = 0.0;
    int who = prev;
    if (std::any_of(weights.begin(), weights.end(),
                    [](double w) { return w > 0.0; })) {
      std::discrete_distribution<int> pick(weights.begin(), weights.end());
      who = pick(rng);
    }
    double len = turn_len(rng);
    if (who == minority) {
      len = std::min(len, minority_budget);
      minority_budget -= len;
    }
    const double start = round_ms(t);
    const double end = round_ms(std::min(t + len, spec.session_span));
    if (end - start >= kMinTurn) {
      if (!out.reference.empty() && who == prev &&
          std::abs(out.reference.back().end() - start) < 1e-9) {
        out.reference.back().duration = round_ms(end - out.reference.back().start);
      } else {
        out.reference.push_back(
            {start, round_ms(end - start), out.speaker_names[static_cast<std::size_t>(who)]});
        turn_speaker.push_back(who);
      }
      prev = who;
    }
    t = end;
    if (pause(rng)) t = round_ms(t + pause_len(rng));
  }

  // Speech regions: merge turns that touch.
  for (const auto &turn : out.reference) {
    if (!out.sad.empty() && std::abs(out.sad.back().end - turn.start) < 1e-9)
      out.sad.back().end = turn.end();
    else
      out.sad.push_back({turn.start, turn.end()});
  }

  const std::vector<Window> windows =
      uniform_segments(out.sad, spec.window, spec.hop);

  // Speaker means: a regular simplex centred on the origin, vertices
  // pairwise separation * sigma apart (sigma = 1).
  Matrix means = orthonormal_columns(spec.embedding_dim, n, rng);
  const Vector centroid = means.rowwise().mean();
  means.colwise() -= centroid;
  means *= spec.speaker_separation / std::sqrt(2.0);

  std::normal_distribution<double> gauss(0.0, 1.0);
  out.embeddings.session_id = spec.session_id;
  out.embeddings.dim = spec.embedding_dim;
  std::size_t first_turn = 0;
  for (const auto &w : windows) {
    while (first_turn < out.reference.size() &&
           out.reference[first_turn].end() <= w.start)
      ++first_turn;
    std::vector<double> share(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = first_turn;
         k < out.reference.size() && out.reference[k].start < w.end; ++k) {
      const double ov = std::min(w.end, out.reference[k].end()) -
                        std::max(w.start, out.reference[k].start);
      if (ov > 0.0) share[static_cast<std::size_t>(turn_speaker[k])] += ov;
    }
    const int dominant = static_cast<int>(
        std::max_element(share.begin(), share.end()) - share.begin());
    out.segment_speaker.push_back(dominant);

    SegmentEmbedding seg;
    seg.start = w.start;
    seg.end = w.end;
    seg.vector = means.col(dominant);
    for (int d = 0; d < spec.embedding_dim; ++d) seg.vector[d] += gauss(rng);
    out.embeddings.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace ganmm
