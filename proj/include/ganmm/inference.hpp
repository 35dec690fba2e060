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

#ifndef GANMM_INFERENCE_HPP
#define GANMM_INFERENCE_HPP

#include <vector>

#include "ganmm/common.hpp"
#include "ganmm/io.hpp"

namespace ganmm {

inline constexpr int kNonSpeech = -1;

/// Frame-level labelling of a session; frame i covers
/// [i * period, (i + 1) * period). Non-speech frames hold kNonSpeech.
struct FrameTimeline {
  double frame_period = 0.01;
  std::vector<int> labels;

  Index size() const { return static_cast<Index>(labels.size()); }
  double frame_midpoint(Index i) const { return (i + 0.5) * frame_period; }
};

/// Number of frames spanning `span` seconds: ceil(span / period), with a
/// small tolerance so exact multiples do not gain a frame.
Index frame_count(double span, double period);

/// Per speech frame: average the posteriors of every segment covering the
/// frame midpoint and take the argmax (ties to the lower index). Speech
/// frames covered by no segment take the posteriors of the segment whose
/// midpoint is nearest. `span` of zero means "end of the last region or
/// segment".
FrameTimeline segments_to_frames(const std::vector<Window> &segments,
                                 const Matrix &posteriors,
                                 const std::vector<SpeechRegion> &sad,
                                 double frame_period, double span = 0.0);

/// Centered median filter applied within each maximal run of speech frames.
/// Windows are truncated at run boundaries; the median of an even-sized
/// window is its lower middle element. Non-speech frames are untouched.
FrameTimeline median_smooth(const FrameTimeline &timeline, int kernel);

/// Run-length encodes speech frames into turns labelled "spk<k>".
std::vector<Turn> frames_to_turns(const FrameTimeline &timeline);

/// Inverse of frames_to_turns at frame resolution. Speaker labels of the
/// form "spk<k>" map to k; others are numbered in order of appearance.
FrameTimeline turns_to_frames(const std::vector<Turn> &turns,
                              double frame_period, double span = 0.0);

}  // namespace ganmm

#endif  // GANMM_INFERENCE_HPP
