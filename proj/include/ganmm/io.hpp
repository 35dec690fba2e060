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

#ifndef GANMM_IO_HPP
#define GANMM_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "ganmm/common.hpp"

namespace ganmm {

struct SegmentEmbedding {
  double start = 0.0;
  double end = 0.0;
  Vector vector;

  double midpoint() const { return 0.5 * (start + end); }
};

/// Time-stamped embeddings for one session, sorted by start time.
struct EmbeddingStream {
  std::string session_id;
  int dim = 0;
  std::vector<SegmentEmbedding> segments;

  std::size_t size() const { return segments.size(); }

  /// Stacks the segment vectors into an M x dim matrix.
  Matrix as_matrix() const;
};

struct SpeechRegion {
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
};

/// One RTTM SPEAKER record.
struct Turn {
  double start = 0.0;
  double duration = 0.0;
  std::string speaker;

  double end() const { return start + duration; }
};

struct Window {
  double start = 0.0;
  double end = 0.0;

  bool operator==(const Window &) const = default;
};

/// Cuts every speech region into windows of length `win` placed every `hop`
/// seconds. Windows never cross a region boundary; a region shorter than
/// `win` yields a single window covering it.
std::vector<Window> uniform_segments(const std::vector<SpeechRegion> &regions,
                                     double win, double hop);

/// Throws std::invalid_argument unless regions are sorted, disjoint and
/// have positive length.
void validate_regions(const std::vector<SpeechRegion> &regions);

// Embeddings file: "#dim D" header, then "start end v1 .. vD" per line.
EmbeddingStream load_embeddings(const std::string &path);
EmbeddingStream parse_embeddings(const std::string &text,
                                 const std::string &source = "<string>");
void write_embeddings(const EmbeddingStream &stream, const std::string &path);

// SAD file: one "start end" pair per line.
std::vector<SpeechRegion> load_sad(const std::string &path);
std::vector<SpeechRegion> parse_sad(const std::string &text,
                                    const std::string &source = "<string>");
void write_sad(const std::vector<SpeechRegion> &regions,
               const std::string &path);

// RTTM: only SPEAKER lines are read; everything else is skipped.
std::vector<Turn> load_rttm(const std::string &path);
std::vector<Turn> parse_rttm(const std::string &text,
                             const std::string &source = "<string>");
void write_rttm(const std::vector<Turn> &turns, const std::string &session_id,
                const std::string &path);
std::string format_rttm(const std::vector<Turn> &turns,
                        const std::string &session_id);

/// Session id as written in the first SPEAKER line of an RTTM file, or an
/// empty string when the file has none.
std::string rttm_session_id(const std::string &path);

}  // namespace ganmm

#endif  // GANMM_IO_HPP
