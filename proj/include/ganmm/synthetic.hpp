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

#ifndef GANMM_SYNTHETIC_HPP
#define GANMM_SYNTHETIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ganmm/io.hpp"

namespace ganmm {

struct SynthSpec {
  int n_speakers = 2;
  double session_span = 300.0;      // seconds
  int embedding_dim = 8;
  double speaker_separation = 6.0;  // inter-mean distance / within-speaker std
  double mean_turn = 3.0;           // seconds, exponential
  std::optional<double> minority_fraction;  // cap on one speaker's share
  double pause_probability = 0.3;   // chance of a silence after a turn
  double mean_pause = 1.0;          // seconds, exponential
  double window = 1.5;
  double hop = 0.5;
  std::string session_id = "synth";
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthSession {
  EmbeddingStream embeddings;
  std::vector<Turn> reference;       // sorted, non-overlapping
  std::vector<SpeechRegion> sad;     // union of the reference turns
  std::vector<int> segment_speaker;  // dominant speaker per segment
  std::vector<std::string> speaker_names;
};

/// Speaker turns from a no-self-transition Markov chain with exponential
/// durations; segments from uniform_segments over the speech regions; each
/// segment embedding drawn from an isotropic Gaussian around the mean of
/// the speaker holding most of the segment. Speaker means are pairwise
/// exactly separation * sigma apart. Deterministic in `seed`.
SynthSession generate_session(const SynthSpec &spec);

}  // namespace ganmm

#endif  // GANMM_SYNTHETIC_HPP
