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

#include "ganmm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace ganmm {

namespace {

constexpr double kFrameEps = 1e-9;

// Index range [first, last) of frames whose midpoint lies in [start, end).
std::pair<Index, Index> frames_with_midpoint_in(double start, double end,
                                                double period, Index n) {
  // midpoint (i + 0.5) * p >= start  <=>  i >= start / p - 0.5
  auto first = static_cast<Index>(std::ceil(start / period - 0.5 - kFrameEps));
  auto last = static_cast<Index>(std::ceil(end / period - 0.5 - kFrameEps));
  first = std::clamp<Index>(first, 0, n);
  last = std::clamp<Index>(last, 0, n);
  return {first, std::max(first, last)};
}

int argmax_row(const Vector &v) {
  Index best = 0;
  for (Index c = 1; c < v.size(); ++c)
    if (v[c] > v[best]) best = c;
  return static_cast<int>(best);
}

}  // namespace

Index frame_count(double span, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("frame period must be > 0");
  if (span <= 0.0) return 0;
  return static_cast<Index>(std::ceil(span / period - kFrameEps));
}

FrameTimeline segments_to_frames(const std::vector<Window> &segments,
                                 const Matrix &posteriors,
                                 const std::vector<SpeechRegion> &sad,
                                 double frame_period, double span) {
  validate_regions(sad);
  if (static_cast<Index>(segments.size()) != posteriors.rows())
    throw std::invalid_argument("one posterior row per segment required");
  if (segments.empty() && !sad.empty())
    throw std::invalid_argument("no segments to cover the speech regions");

  if (span <= 0.0) {
    for (const auto &r : sad) span = std::max(span, r.end);
    for (const auto &s : segments) span = std::max(span, s.end);
  }
  FrameTimeline tl;
  tl.frame_period = frame_period;
  const Index n = frame_count(span, frame_period);
  tl.labels.assign(static_cast<std::size_t>(n), kNonSpeech);
  if (n == 0) return tl;

  const Index n_classes = posteriors.cols();
  Matrix acc = Matrix::Zero(n, n_classes);
  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto [first, last] = frames_with_midpoint_in(
        segments[s].start, segments[s].end, frame_period, n);
    for (Index f = first; f < last; ++f) {
      acc.row(f) += posteriors.row(static_cast<Index>(s));
      ++cover[static_cast<std::size_t>(f)];
    }
  }

  std::size_t nearest = 0;
  for (const auto &r : sad) {
    const auto [first, last] =
        frames_with_midpoint_in(r.start, r.end, frame_period, n);
    for (Index f = first; f < last; ++f) {
      if (cover[static_cast<std::size_t>(f)] > 0) {
        tl.labels[static_cast<std::size_t>(f)] = argmax_row(acc.row(f));
        continue;
      }
      // Segments are sorted by start, so their midpoints are too.
      const double mid = tl.frame_midpoint(f);
      while (nearest + 1 < segments.size() &&
             std::abs(segments[nearest + 1].start + segments[nearest + 1].end -
                      2.0 * mid) <
                 std::abs(segments[nearest].start + segments[nearest].end -
                          2.0 * mid))
        ++nearest;
      tl.labels[static_cast<std::size_t>(f)] =
          argmax_row(posteriors.row(static_cast<Index>(nearest)));
    }
  }
  return tl;
}

FrameTimeline median_smooth(const FrameTimeline &timeline, int kernel) {
  if (kernel < 1 || kernel % 2 == 0)
    throw std::invalid_argument("median kernel must be a positive odd integer");
  FrameTimeline out = timeline;
  const auto &in = timeline.labels;
  const std::size_t n = in.size();
  const std::size_t half = static_cast<std::size_t>(kernel / 2);

  int max_label = -1;
  for (int l : in) max_label = std::max(max_label, l);
  std::vector<std::size_t> hist(static_cast<std::size_t>(max_label + 1), 0);

  std::size_t run_start = 0;
  while (run_start < n) {
    if (in[run_start] < 0) {
      ++run_start;
      continue;
    }
    std::size_t run_end = run_start;
    while (run_end < n && in[run_end] >= 0) ++run_end;

    // Sliding histogram over [lo, hi) within the run.
    std::fill(hist.begin(), hist.end(), 0);
    std::size_t lo = run_start, hi = run_start;
    for (std::size_t i = run_start; i < run_end; ++i) {
      const std::size_t want_lo = i >= run_start + half ? i - half : run_start;
      const std::size_t want_hi = std::min(run_end, i + half + 1);
      while (hi < want_hi) ++hist[static_cast<std::size_t>(in[hi++])];
      while (lo < want_lo) --hist[static_cast<std::size_t>(in[lo++])];
      const std::size_t rank = (hi - lo - 1) / 2;  // lower middle
      std::size_t seen = 0;
      for (std::size_t l = 0; l < hist.size(); ++l) {
        seen += hist[l];
        if (seen > rank) {
          out.labels[i] = static_cast<int>(l);
          break;
        }
      }
    }
    run_start = run_end;
  }
  return out;
}

std::vector<Turn> frames_to_turns(const FrameTimeline &timeline) {
  std::vector<Turn> turns;
  const auto &l = timeline.labels;
  std::size_t i = 0;
  while (i < l.size()) {
    if (l[i] < 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < l.size() && l[j] == l[i]) ++j;
    turns.push_back({static_cast<double>(i) * timeline.frame_period,
                     static_cast<double>(j - i) * timeline.frame_period,
                     "spk" + std::to_string(l[i])});
    i = j;
  }
  return turns;
}

FrameTimeline turns_to_frames(const std::vector<Turn> &turns,
                              double frame_period, double span) {
  if (span <= 0.0)
    for (const auto &t : turns) span = std::max(span, t.end());
  FrameTimeline tl;
  tl.frame_period = frame_period;
  const Index n = frame_count(span, frame_period);
  tl.labels.assign(static_cast<std::size_t>(n), kNonSpeech);

  std::map<std::string, int> ids;
  int next_free = 0;
  for (const auto &t : turns) {
    if (t.speaker.rfind("spk", 0) == 0 && t.speaker.size() > 3 &&
        std::all_of(t.speaker.begin() + 3, t.speaker.end(),
                    [](char c) { return c >= '0' && c <= '9'; }))
      ids.emplace(t.speaker, std::stoi(t.speaker.substr(3)));
  }
  for (const auto &[name, id] : ids) next_free = std::max(next_free, id + 1);
  for (const auto &t : turns) {
    auto it = ids.find(t.speaker);
    if (it == ids.end()) it = ids.emplace(t.speaker, next_free++).first;
    const auto [first, last] =
        frames_with_midpoint_in(t.start, t.end(), frame_period, n);
    for (Index f = first; f < last; ++f)
      tl.labels[static_cast<std::size_t>(f)] = it->second;
  }
  return tl;
}

}  // namespace ganmm
