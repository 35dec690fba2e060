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

#ifndef GANMM_PIPELINE_HPP
#define GANMM_PIPELINE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ganmm/inference.hpp"
#include "ganmm/io.hpp"
#include "ganmm/mixture.hpp"

namespace ganmm {

/// System refinements: raw or spectral features, random or k-means
/// initialization of the pre-training partition.
enum class Variant {
  kP1,  // raw embeddings, random init
  kP2,  // raw embeddings, k-means init
  kP3,  // spectral embedding, random init
  kP4,  // spectral embedding, k-means init
};

Variant parse_variant(std::string_view name);  // "p1".."p4", any case
std::string variant_name(Variant v);            // "p1".."p4"
constexpr bool uses_spectral(Variant v) {
  return v == Variant::kP3 || v == Variant::kP4;
}
constexpr bool uses_kmeans(Variant v) {
  return v == Variant::kP2 || v == Variant::kP4;
}

struct PipelineConfig {
  GanmmConfig ganmm;
  int kmeans_restarts = 10;
  double frame_period = 0.01;
  int median_kernel = 361;
  int max_speakers = 10;  // upper end of the eigengap search
  std::optional<int> spectral_dim;  // defaults to the speaker count

  void validate() const;
};

/// "key = value" lines; '#' starts a comment. Unknown keys are errors.
PipelineConfig parse_pipeline_config(const std::string &text,
                                     const std::string &source = "<string>");
PipelineConfig load_pipeline_config(const std::string &path);
std::string format_pipeline_config(const PipelineConfig &config);

struct DiarizationResult {
  std::vector<Turn> turns;
  int n_speakers = 0;
  bool speakers_estimated = false;
  Matrix features;  // what the mixture was trained on
  std::vector<int> init_labels;
  Partition partition;
  FitHistory history;
  std::optional<GanmmModel> model;
  FrameTimeline frames;  // after smoothing
};

/// Full pipeline on one session. When `n_speakers` is empty the count is
/// estimated by the eigengap of the cosine-affinity Laplacian.
DiarizationResult diarize(const EmbeddingStream &stream,
                          const std::vector<SpeechRegion> &sad, Variant variant,
                          std::optional<int> n_speakers,
                          const PipelineConfig &config);

}  // namespace ganmm

#endif  // GANMM_PIPELINE_HPP
