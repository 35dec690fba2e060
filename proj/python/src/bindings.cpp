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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ganmm/io.hpp"
#include "ganmm/kmeans.hpp"
#include "ganmm/linalg.hpp"
#include "ganmm/mixture.hpp"
#include "ganmm/pipeline.hpp"
#include "ganmm/scoring.hpp"
#include "ganmm/spectral.hpp"
#include "ganmm/synthetic.hpp"

namespace py = pybind11;
using namespace ganmm;

namespace {

EmbeddingStream make_stream(const std::vector<double> &starts,
                            const std::vector<double> &ends, const Matrix &vectors,
                            const std::string &session_id) {
  if (starts.size() != ends.size() ||
      static_cast<Index>(starts.size()) != vectors.rows())
    throw std::invalid_argument("starts, ends and vectors must have equal length");
  EmbeddingStream s;
  s.session_id = session_id;
  s.dim = static_cast<int>(vectors.cols());
  for (std::size_t i = 0; i < starts.size(); ++i)
    s.segments.push_back({starts[i], ends[i], vectors.row(i).transpose()});
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GAN mixture model speaker diarization";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<AlgorithmError>(m, "AlgorithmError", PyExc_RuntimeError);

  py::class_<SpeechRegion>(m, "SpeechRegion")
      .def(py::init<double, double>(), py::arg("start"), py::arg("end"))
      .def_readwrite("start", &SpeechRegion::start)
      .def_readwrite("end", &SpeechRegion::end)
      .def("__repr__", [](const SpeechRegion &r) {
        return "SpeechRegion(" + std::to_string(r.start) + ", " +
               std::to_string(r.end) + ")";
      });

  py::class_<Turn>(m, "Turn")
      .def(py::init([](double start, double duration, std::string speaker) {
             return Turn{start, duration, std::move(speaker)};
           }),
           py::arg("start"), py::arg("duration"), py::arg("speaker"))
      .def_readwrite("start", &Turn::start)
      .def_readwrite("duration", &Turn::duration)
      .def_readwrite("speaker", &Turn::speaker)
      .def_property_readonly("end", &Turn::end)
      .def("__repr__", [](const Turn &t) {
        return "Turn(" + std::to_string(t.start) + ", " +
               std::to_string(t.duration) + ", '" + t.speaker + "')";
      });

  py::class_<EmbeddingStream>(m, "EmbeddingStream")
      .def(py::init(&make_stream), py::arg("starts"), py::arg("ends"),
           py::arg("vectors"), py::arg("session_id") = "session")
      .def_readwrite("session_id", &EmbeddingStream::session_id)
      .def_readonly("dim", &EmbeddingStream::dim)
      .def_property_readonly("starts",
                             [](const EmbeddingStream &s) {
                               std::vector<double> v;
                               for (const auto &g : s.segments) v.push_back(g.start);
                               return v;
                             })
      .def_property_readonly("ends",
                             [](const EmbeddingStream &s) {
                               std::vector<double> v;
                               for (const auto &g : s.segments) v.push_back(g.end);
                               return v;
                             })
      .def_property_readonly("vectors", &EmbeddingStream::as_matrix)
      .def("__len__", &EmbeddingStream::size);

  m.def("load_embeddings", &load_embeddings, py::arg("path"));
  m.def("write_embeddings", &write_embeddings, py::arg("stream"), py::arg("path"));
  m.def("load_sad", &load_sad, py::arg("path"));
  m.def("write_sad", &write_sad, py::arg("regions"), py::arg("path"));
  m.def("load_rttm", &load_rttm, py::arg("path"));
  m.def("write_rttm", &write_rttm, py::arg("turns"), py::arg("session_id"),
        py::arg("path"));
  m.def("uniform_segments",
        [](const std::vector<SpeechRegion> &regions, double window, double hop) {
          std::vector<std::pair<double, double>> out;
          for (const auto &w : uniform_segments(regions, window, hop))
            out.emplace_back(w.start, w.end);
          return out;
        },
        py::arg("regions"), py::arg("window") = 1.5, py::arg("hop") = 0.5);

  py::class_<SymmetricEigen>(m, "SymmetricEigen")
      .def_readonly("values", &SymmetricEigen::values)
      .def_readonly("vectors", &SymmetricEigen::vectors)
      .def_readonly("sweeps", &SymmetricEigen::sweeps);
  m.def("symmetric_eig", &symmetric_eig, py::arg("a"),
        py::arg("tolerance") = 1e-10, py::arg("max_sweeps") = 100);

  m.def("cosine_affinity",
        [](const Matrix &points) { return cosine_affinity(points).values; },
        py::arg("points"));
  m.def("normalized_laplacian",
        [](const Matrix &a) { return normalized_laplacian(AffinityMatrix{a}); },
        py::arg("affinity"));
  m.def("laplacian_eigenvalues",
        [](const Matrix &a) { return laplacian_eigenvalues(AffinityMatrix{a}); },
        py::arg("affinity"));
  m.def("spectral_embed",
        [](const Matrix &a, int dim) { return spectral_embed(AffinityMatrix{a}, dim); },
        py::arg("affinity"), py::arg("dim"));
  m.def("eigengap_count", &eigengap_count, py::arg("eigenvalues"),
        py::arg("max_speakers") = 10);
  m.def("estimate_num_speakers",
        [](const Matrix &a, int max_speakers) {
          return estimate_num_speakers(AffinityMatrix{a}, max_speakers);
        },
        py::arg("affinity"), py::arg("max_speakers") = 10);

  py::class_<KmeansResult>(m, "KmeansResult")
      .def_readonly("labels", &KmeansResult::labels)
      .def_readonly("centroids", &KmeansResult::centroids)
      .def_readonly("inertia", &KmeansResult::inertia)
      .def_readonly("iterations", &KmeansResult::iterations);
  m.def("kmeans",
        [](const Matrix &points, int k, int restarts, int max_iterations,
           std::uint64_t seed) {
          return kmeans(points, k, KmeansOptions{restarts, max_iterations, seed});
        },
        py::arg("points"), py::arg("k"), py::arg("restarts") = 10,
        py::arg("max_iterations") = 300, py::arg("seed") = 0);

  py::class_<GanmmConfig>(m, "GanmmConfig")
      .def(py::init<>())
      .def_readwrite("n_clusters", &GanmmConfig::n_clusters)
      .def_readwrite("learning_rate", &GanmmConfig::learning_rate)
      .def_readwrite("batch_size", &GanmmConfig::batch_size)
      .def_readwrite("n_critic", &GanmmConfig::n_critic)
      .def_readwrite("clip", &GanmmConfig::clip)
      .def_readwrite("pretrain_epochs", &GanmmConfig::pretrain_epochs)
      .def_readwrite("em_epochs", &GanmmConfig::em_epochs)
      .def_readwrite("noise_dim", &GanmmConfig::noise_dim)
      .def_readwrite("hidden_dim", &GanmmConfig::hidden_dim)
      .def_readwrite("samples_per_generator", &GanmmConfig::samples_per_generator)
      .def_readwrite("augment_initial", &GanmmConfig::augment_initial)
      .def_readwrite("augment_decay", &GanmmConfig::augment_decay)
      .def_readwrite("classifier_passes", &GanmmConfig::classifier_passes)
      .def_readwrite("wgan_iters_per_mstep", &GanmmConfig::wgan_iters_per_mstep)
      .def_readwrite("stable_iterations", &GanmmConfig::stable_iterations)
      .def_readwrite("seed", &GanmmConfig::seed);

  py::class_<FitHistory>(m, "FitHistory")
      .def_readonly("assignment_changes", &FitHistory::assignment_changes)
      .def_readonly("classifier_loss", &FitHistory::classifier_loss)
      .def_readonly("sigma", &FitHistory::sigma)
      .def_readonly("warnings", &FitHistory::warnings)
      .def_readonly("max_critic_abs_weight", &FitHistory::max_critic_abs_weight)
      .def_readonly("e_steps", &FitHistory::e_steps)
      .def_readonly("converged", &FitHistory::converged);

  m.def("fit_ganmm",
        [](const Matrix &data, const GanmmConfig &config,
           const std::vector<int> &init_labels) {
          FitResult r = fit(data, config, init_labels);
          return py::make_tuple(r.partition.assignment, r.partition.posteriors,
                                r.history);
        },
        py::arg("data"), py::arg("config"), py::arg("init_labels"),
        "Returns (assignment, posteriors, history).");

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("ganmm", &PipelineConfig::ganmm)
      .def_readwrite("kmeans_restarts", &PipelineConfig::kmeans_restarts)
      .def_readwrite("frame_period", &PipelineConfig::frame_period)
      .def_readwrite("median_kernel", &PipelineConfig::median_kernel)
      .def_readwrite("max_speakers", &PipelineConfig::max_speakers)
      .def_readwrite("spectral_dim", &PipelineConfig::spectral_dim)
      .def("__str__", &format_pipeline_config);
  m.def("load_pipeline_config", &load_pipeline_config, py::arg("path"));
  m.def("parse_pipeline_config", &parse_pipeline_config, py::arg("text"),
        py::arg("source") = "<string>");

  py::class_<DiarizationResult>(m, "DiarizationResult")
      .def_readonly("turns", &DiarizationResult::turns)
      .def_readonly("n_speakers", &DiarizationResult::n_speakers)
      .def_readonly("speakers_estimated", &DiarizationResult::speakers_estimated)
      .def_readonly("features", &DiarizationResult::features)
      .def_readonly("init_labels", &DiarizationResult::init_labels)
      .def_property_readonly("assignment",
                             [](const DiarizationResult &r) {
                               return r.partition.assignment;
                             })
      .def_readonly("history", &DiarizationResult::history);
  m.def("diarize",
        [](const EmbeddingStream &stream, const std::vector<SpeechRegion> &sad,
           const std::string &variant, std::optional<int> n_speakers,
           std::optional<PipelineConfig> config) {
          py::gil_scoped_release release;
          return diarize(stream, sad, parse_variant(variant), n_speakers,
                         config.value_or(PipelineConfig{}));
        },
        py::arg("stream"), py::arg("sad"), py::arg("variant") = "p4",
        py::arg("n_speakers") = py::none(), py::arg("config") = py::none());

  py::class_<DerReport>(m, "DerReport")
      .def_readonly("der", &DerReport::der)
      .def_property_readonly("miss", &DerReport::miss)
      .def_property_readonly("false_alarm", &DerReport::false_alarm)
      .def_property_readonly("confusion", &DerReport::confusion)
      .def_property_readonly("scored", &DerReport::total_ref_speech)
      .def_readonly("mapping", &DerReport::mapping);
  m.def("compute_der",
        [](const std::vector<Turn> &ref, const std::vector<Turn> &hyp,
           double collar, bool score_overlap) {
          return compute_der(ref, hyp, DerOptions{collar, score_overlap});
        },
        py::arg("reference"), py::arg("hypothesis"), py::arg("collar") = 0.25,
        py::arg("score_overlap") = false);
  m.def("minority_speaker_error",
        [](const std::vector<Turn> &ref, const std::vector<Turn> &hyp,
           double threshold, double span) {
          return minority_speaker_error(ref, hyp, threshold, span);
        },
        py::arg("reference"), py::arg("hypothesis"), py::arg("threshold"),
        py::arg("span"));

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("n_speakers", &SynthSpec::n_speakers)
      .def_readwrite("session_span", &SynthSpec::session_span)
      .def_readwrite("embedding_dim", &SynthSpec::embedding_dim)
      .def_readwrite("speaker_separation", &SynthSpec::speaker_separation)
      .def_readwrite("mean_turn", &SynthSpec::mean_turn)
      .def_readwrite("minority_fraction", &SynthSpec::minority_fraction)
      .def_readwrite("pause_probability", &SynthSpec::pause_probability)
      .def_readwrite("session_id", &SynthSpec::session_id)
      .def_readwrite("seed", &SynthSpec::seed);
  py::class_<SynthSession>(m, "SynthSession")
      .def_readonly("embeddings", &SynthSession::embeddings)
      .def_readonly("reference", &SynthSession::reference)
      .def_readonly("sad", &SynthSession::sad)
      .def_readonly("segment_speaker", &SynthSession::segment_speaker)
      .def_readonly("speaker_names", &SynthSession::speaker_names);
  m.def("generate_session", &generate_session, py::arg("spec"));
}
