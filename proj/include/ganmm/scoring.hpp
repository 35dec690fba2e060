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

#ifndef GANMM_SCORING_HPP
#define GANMM_SCORING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ganmm/io.hpp"

namespace ganmm {

struct DerOptions {
  double collar = 0.25;        // seconds excluded on each side of a reference boundary
  bool score_overlap = false;  // score regions with more than one reference speaker
};

/// Diarization error components. Times are accumulated in whole
/// milliseconds; the *_seconds() accessors convert.
struct DerReport {
  std::int64_t miss_ms = 0;
  std::int64_t false_alarm_ms = 0;
  std::int64_t confusion_ms = 0;
  std::int64_t scored_ms = 0;  // total scored reference speech
  std::int64_t span_ms = 0;    // end of the last reference turn
  double der = 0.0;
  std::map<std::string, std::string> mapping;  // hypothesis -> reference

  double miss() const { return miss_ms / 1000.0; }
  double false_alarm() const { return false_alarm_ms / 1000.0; }
  double confusion() const { return confusion_ms / 1000.0; }
  double total_ref_speech() const { return scored_ms / 1000.0; }
  double span() const { return span_ms / 1000.0; }
};

/// NIST-style DER with an optimal one-to-one speaker mapping (Hungarian
/// assignment on the overlap-duration matrix). Throws AlgorithmError when
/// no reference speech survives the collar/overlap exclusions.
DerReport compute_der(const std::vector<Turn> &reference,
                      const std::vector<Turn> &hypothesis,
                      const DerOptions &options = {});

/// Overlap durations (ms) between hypothesis speakers (rows) and
/// reference speakers (columns) over scored regions.
struct OverlapTable {
  std::vector<std::string> hyp_speakers;
  std::vector<std::string> ref_speakers;
  std::vector<std::vector<std::int64_t>> ms;  // [hyp][ref]
};
OverlapTable speaker_overlap(const std::vector<Turn> &reference,
                             const std::vector<Turn> &hypothesis,
                             const DerOptions &options = {});

/// Maximum-weight assignment, rows to columns; -1 for unassigned rows.
std::vector<int> hungarian_max(const std::vector<std::vector<std::int64_t>> &w);

/// Exhaustive search over injective hypothesis -> reference maps. Limited
/// to 8 speakers per side.
std::map<std::string, std::string> brute_force_mapping(
    const std::vector<Turn> &reference, const std::vector<Turn> &hypothesis,
    const DerOptions &options = {});

/// Correctly attributed time (ms) of a mapping.
std::int64_t mapped_overlap_ms(const OverlapTable &table,
                               const std::map<std::string, std::string> &mapping);

/// Confusion time inside the speech of reference speakers whose total speech
/// is below threshold * session_span, divided by session_span.
double minority_speaker_error(const std::vector<Turn> &reference,
                              const std::vector<Turn> &hypothesis,
                              double threshold, double session_span,
                              const DerOptions &options = {0.0, false});

struct SessionScore {
  std::string session_id;
  DerReport report;
};

struct DurationBucket {
  std::string label;
  double min_minutes = 0.0;  // inclusive
  double max_minutes = 0.0;  // exclusive; infinity for the last bucket
  int sessions = 0;
  double mean_der = 0.0;
};

struct AggregateReport {
  int sessions = 0;
  double mean_der = 0.0;
  double std_der = 0.0;  // population standard deviation
  std::vector<DurationBucket> buckets;
};

/// Mean and population standard deviation of DER, plus a breakdown by
/// session length in 10-minute buckets (<10, 10-20, ..., 50-60, >=60).
AggregateReport aggregate_reports(const std::vector<SessionScore> &scores);

/// Human-readable summary followed by a key=value block.
std::string format_report(const DerReport &report, const DerOptions &options);

}  // namespace ganmm

#endif  // GANMM_SCORING_HPP
