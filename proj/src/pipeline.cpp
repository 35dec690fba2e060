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

#include "ganmm/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ganmm/kmeans.hpp"
#include "ganmm/spectral.hpp"

namespace ganmm {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T parse_number(const std::string &v, const std::string &key,
               const std::string &source, std::size_t line) {
  T out{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ParseError(source, line, "invalid value '" + v + "' for " + key);
  return out;
}

using Setter = std::function<void(PipelineConfig &, const std::string &,
                                  const std::string &, std::size_t)>;

template <typename T>
Setter set_field(T GanmmConfig::*field) {
  return [field](PipelineConfig &c, const std::string &v, const std::string &src,
                 std::size_t line) {
    c.ganmm.*field = parse_number<T>(v, "ganmm field", src, line);
  };
}

template <typename T>
Setter set_pipeline(T PipelineConfig::*field) {
  return [field](PipelineConfig &c, const std::string &v, const std::string &src,
                 std::size_t line) {
    c.*field = parse_number<T>(v, "pipeline field", src, line);
  };
}

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"learning_rate", set_field(&GanmmConfig::learning_rate)},
      {"batch_size", set_field(&GanmmConfig::batch_size)},
      {"n_critic", set_field(&GanmmConfig::n_critic)},
      {"clip", set_field(&GanmmConfig::clip)},
      {"pretrain_epochs", set_field(&GanmmConfig::pretrain_epochs)},
      {"em_epochs", set_field(&GanmmConfig::em_epochs)},
      {"noise_dim", set_field(&GanmmConfig::noise_dim)},
      {"hidden_dim", set_field(&GanmmConfig::hidden_dim)},
      {"samples_per_generator", set_field(&GanmmConfig::samples_per_generator)},
      {"augment_initial",
       [](PipelineConfig &c, const std::string &v, const std::string &src,
          std::size_t line) {
         if (v == "auto")
           c.ganmm.augment_initial.reset();
         else
           c.ganmm.augment_initial = parse_number<int>(v, "augment_initial", src, line);
       }},
      {"augment_decay", set_field(&GanmmConfig::augment_decay)},
      {"classifier_passes", set_field(&GanmmConfig::classifier_passes)},
      {"wgan_iters_per_mstep", set_field(&GanmmConfig::wgan_iters_per_mstep)},
      {"stable_iterations", set_field(&GanmmConfig::stable_iterations)},
      {"rmsprop_decay", set_field(&GanmmConfig::rmsprop_decay)},
      {"rmsprop_epsilon", set_field(&GanmmConfig::rmsprop_epsilon)},
      {"init_scale", set_field(&GanmmConfig::init_scale)},
      {"seed", set_field(&GanmmConfig::seed)},
      {"kmeans_restarts", set_pipeline(&PipelineConfig::kmeans_restarts)},
      {"frame_period", set_pipeline(&PipelineConfig::frame_period)},
      {"median_kernel", set_pipeline(&PipelineConfig::median_kernel)},
      {"max_speakers", set_pipeline(&PipelineConfig::max_speakers)},
      {"spectral_dim",
       [](PipelineConfig &c, const std::string &v, const std::string &src,
          std::size_t line) {
         if (v == "auto")
           c.spectral_dim.reset();
         else
           c.spectral_dim = parse_number<int>(v, "spectral_dim", src, line);
       }},
  };
  return table;
}

}  // namespace

Variant parse_variant(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "p1") return Variant::kP1;
  if (s == "p2") return Variant::kP2;
  if (s == "p3") return Variant::kP3;
  if (s == "p4") return Variant::kP4;
  throw std::invalid_argument("unknown variant '" + std::string(name) +
                              "' (expected p1, p2, p3 or p4)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kP1: return "p1";
    case Variant::kP2: return "p2";
    case Variant::kP3: return "p3";
    case Variant::kP4: return "p4";
  }
  return "?";
}

void PipelineConfig::validate() const {
  ganmm.validate();
  if (kmeans_restarts < 1)
    throw std::invalid_argument("kmeans_restarts must be >= 1");
  if (!(frame_period > 0.0))
    throw std::invalid_argument("frame_period must be > 0");
  if (median_kernel < 1 || median_kernel % 2 == 0)
    throw std::invalid_argument("median_kernel must be a positive odd integer");
  if (max_speakers < 2) throw std::invalid_argument("max_speakers must be >= 2");
  if (spectral_dim && *spectral_dim < 1)
    throw std::invalid_argument("spectral_dim must be >= 1");
}

PipelineConfig parse_pipeline_config(const std::string &text,
                                     const std::string &source) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(source, lineno, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ParseError(source, lineno, "unknown key '" + key + "'");
    it->second(cfg, value, source, lineno);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument &e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pipeline_config(ss.str(), path);
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string format_pipeline_config(const PipelineConfig &c) {
  std::ostringstream out;
  const GanmmConfig &g = c.ganmm;
  out << "learning_rate = " << shortest(g.learning_rate) << '\n'
      << "batch_size = " << g.batch_size << '\n'
      << "n_critic = " << g.n_critic << '\n'
      << "clip = " << shortest(g.clip) << '\n'
      << "pretrain_epochs = " << g.pretrain_epochs << '\n'
      << "em_epochs = " << g.em_epochs << '\n'
      << "noise_dim = " << g.noise_dim << '\n'
      << "hidden_dim = " << g.hidden_dim << '\n'
      << "samples_per_generator = " << g.samples_per_generator << '\n'
      << "augment_initial = "
      << (g.augment_initial ? std::to_string(*g.augment_initial) : "auto") << '\n'
      << "augment_decay = " << shortest(g.augment_decay) << '\n'
      << "classifier_passes = " << g.classifier_passes << '\n'
      << "wgan_iters_per_mstep = " << g.wgan_iters_per_mstep << '\n'
      << "stable_iterations = " << g.stable_iterations << '\n'
      << "rmsprop_decay = " << shortest(g.rmsprop_decay) << '\n'
      << "rmsprop_epsilon = " << shortest(g.rmsprop_epsilon) << '\n'
      << "init_scale = " << shortest(g.init_scale) << '\n'
      << "seed = " << g.seed << '\n'
      << "kmeans_restarts = " << c.kmeans_restarts << '\n'
      << "frame_period = " << shortest(c.frame_period) << '\n'
      << "median_kernel = " << c.median_kernel << '\n'
      << "max_speakers = " << c.max_speakers << '\n'
      << "spectral_dim = "
      << (c.spectral_dim ? std::to_string(*c.spectral_dim) : "auto") << '\n';
  return out.str();
}

DiarizationResult diarize(const EmbeddingStream &stream,
                          const std::vector<SpeechRegion> &sad, Variant variant,
                          std::optional<int> n_speakers,
                          const PipelineConfig &config) {
  config.validate();
  if (stream.segments.empty())
    throw std::invalid_argument("embedding stream is empty");
  const Index n = static_cast<Index>(stream.size());
  const Matrix raw = stream.as_matrix();

  DiarizationResult res;
  const bool need_affinity = uses_spectral(variant) || !n_speakers;
  AffinityMatrix affinity;
  SymmetricEigen eig;
  if (need_affinity) {
    affinity = cosine_affinity(raw);
    eig = laplacian_decomposition(affinity);
  }
  if (n_speakers) {
    res.n_speakers = *n_speakers;
  } else {
    res.n_speakers = eigengap_count(eig.values, config.max_speakers);
    res.speakers_estimated = true;
  }
  if (res.n_speakers < 2)
    throw std::invalid_argument("at least two speakers are required");
  if (res.n_speakers > n)
    throw std::invalid_argument("more speakers than segments");

  if (uses_spectral(variant))
    res.features =
        embed_rows(eig, std::min<int>(config.spectral_dim.value_or(res.n_speakers),
                                      static_cast<int>(n)));
  else
    res.features = raw;

  GanmmConfig gcfg = config.ganmm;
  gcfg.n_clusters = res.n_speakers;
  if (uses_kmeans(variant)) {
    KmeansOptions ko;
    ko.restarts = config.kmeans_restarts;
    ko.seed = gcfg.seed;
    const KmeansResult km = kmeans(res.features, res.n_speakers, ko);
    if (std::any_of(km.empty.begin(), km.empty.end(), [](bool e) { return e; }))
      throw AlgorithmError("k-means left a cluster empty");
    res.init_labels = km.labels;
  } else {
    res.init_labels = random_balanced_labels(n, res.n_speakers, gcfg.seed + 1);
  }

  FitResult fitted = fit(res.features, gcfg, res.init_labels);
  res.partition = std::move(fitted.partition);
  res.history = std::move(fitted.history);
  res.model = std::move(fitted.model);

  std::vector<Window> windows;
  windows.reserve(stream.segments.size());
  for (const auto &s : stream.segments) windows.push_back({s.start, s.end});
  const FrameTimeline frames = segments_to_frames(
      windows, res.partition.posteriors, sad, config.frame_period);
  res.frames = median_smooth(frames, config.median_kernel);
  res.turns = frames_to_turns(res.frames);
  return res;
}

}  // namespace ganmm
