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

// ganmm-diar: synthetic sessions, GAN-mixture diarization and DER scoring.
//
//   ganmm-diar synth    --out DIR [--speakers 2] [--span 300] [--seed 0] ...
//   ganmm-diar diarize  --embeddings F --sad F --out F.rttm [--variant p4]
//                       [--speakers INT|auto] [--config F] [--seed INT]
//   ganmm-diar score    --ref F|DIR --hyp F|DIR [--collar 0.25] [--overlap]
//   ganmm-diar eig      --embeddings F [--max-speakers 10]
//
// Exit status: 0 success, 1 algorithmic failure, 2 usage or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganmm/io.hpp"
#include "ganmm/mixture.hpp"
#include "ganmm/pipeline.hpp"
#include "ganmm/scoring.hpp"
#include "ganmm/spectral.hpp"
#include "ganmm/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kAlgorithmFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string &path, const char *what) {
  if (!fs::is_regular_file(path))
    throw UsageError(std::string(what) + " not found: " + path);
}

struct SynthArgs {
  ganmm::SynthSpec spec;
  double minority = 0.0;
  std::string out_dir;
};

int run_synth(const SynthArgs &args) {
  ganmm::SynthSpec spec = args.spec;
  if (args.minority > 0.0) spec.minority_fraction = args.minority;
  const ganmm::SynthSession s = ganmm::generate_session(spec);
  fs::create_directories(args.out_dir);
  const fs::path base = fs::path(args.out_dir) / spec.session_id;
  ganmm::write_embeddings(s.embeddings, base.string() + ".emb");
  ganmm::write_sad(s.sad, base.string() + ".sad");
  ganmm::write_rttm(s.reference, spec.session_id, base.string() + ".rttm");
  std::cout << "wrote " << base.string() << ".{emb,sad,rttm}: "
            << s.embeddings.size() << " segments, " << s.reference.size()
            << " turns, " << spec.n_speakers << " speakers\n";
  return kOk;
}

struct DiarizeArgs {
  std::string embeddings;
  std::string sad;
  std::string variant = "p4";
  std::string speakers = "auto";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string save_model;
};

int run_diarize(const DiarizeArgs &args) {
  require_file(args.embeddings, "embeddings file");
  require_file(args.sad, "SAD file");
  if (!args.config.empty()) require_file(args.config, "config file");

  ganmm::Variant variant;
  try {
    variant = ganmm::parse_variant(args.variant);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  std::optional<int> n_speakers;
  if (args.speakers != "auto") {
    try {
      std::size_t used = 0;
      n_speakers = std::stoi(args.speakers, &used);
      if (used != args.speakers.size() || *n_speakers < 2) throw 0;
    } catch (...) {
      throw UsageError("--speakers expects an integer >= 2 or 'auto'");
    }
  }

  ganmm::PipelineConfig config;
  if (!args.config.empty()) config = ganmm::load_pipeline_config(args.config);
  if (args.seed) config.ganmm.seed = *args.seed;

  const ganmm::EmbeddingStream stream = ganmm::load_embeddings(args.embeddings);
  const std::vector<ganmm::SpeechRegion> sad = ganmm::load_sad(args.sad);
  const ganmm::DiarizationResult res =
      ganmm::diarize(stream, sad, variant, n_speakers, config);

  const fs::path parent = fs::path(args.out).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  ganmm::write_rttm(res.turns, stream.session_id, args.out);
  std::ofstream manifest(args.out + ".manifest");
  if (!manifest) throw std::runtime_error("cannot write " + args.out + ".manifest");
  manifest << "session = " << stream.session_id << '\n'
           << "variant = " << ganmm::variant_name(variant) << '\n'
           << "speakers = " << res.n_speakers << '\n'
           << "speaker_mode = " << (res.speakers_estimated ? "estimated" : "known")
           << '\n'
           << "segments = " << stream.size() << '\n'
           << "e_steps = " << res.history.e_steps << '\n'
           << "converged = " << (res.history.converged ? 1 : 0) << '\n'
           << ganmm::format_pipeline_config(config);
  for (const auto &w : res.history.warnings) std::cerr << "warning: " << w << '\n';

  if (!args.save_model.empty()) {
    ganmm::save_model(*res.model, args.save_model);
  }
  std::cout << "wrote " << args.out << " (" << res.turns.size() << " turns, "
            << res.n_speakers << " speakers "
            << (res.speakers_estimated ? "estimated" : "given") << ")\n";
  return kOk;
}

struct ScoreArgs {
  std::string ref;
  std::string hyp;
  double collar = 0.25;
  bool overlap = false;
  double minority = 0.0;
};

void print_minority(const std::vector<ganmm::Turn> &ref,
                    const std::vector<ganmm::Turn> &hyp, double threshold,
                    double span) {
  const double err = ganmm::minority_speaker_error(ref, hyp, threshold, span);
  std::printf("minority_speaker_error=%.4f%%\n", 100.0 * err);
}

int run_score(const ScoreArgs &args) {
  ganmm::DerOptions opts{args.collar, args.overlap};
  if (args.collar < 0.0) throw UsageError("--collar must be >= 0");

  if (fs::is_directory(args.ref) || fs::is_directory(args.hyp)) {
    if (!fs::is_directory(args.ref) || !fs::is_directory(args.hyp))
      throw UsageError("--ref and --hyp must both be files or both directories");
    std::vector<fs::path> refs;
    for (const auto &e : fs::directory_iterator(args.ref))
      if (e.path().extension() == ".rttm") refs.push_back(e.path());
    std::sort(refs.begin(), refs.end());
    if (refs.empty()) throw UsageError("no .rttm files in " + args.ref);
    std::vector<ganmm::SessionScore> scores;
    for (const auto &r : refs) {
      const fs::path h = fs::path(args.hyp) / r.filename();
      require_file(h.string(), "hypothesis RTTM");
      ganmm::SessionScore s;
      s.session_id = r.stem().string();
      s.report = ganmm::compute_der(ganmm::load_rttm(r.string()),
                                    ganmm::load_rttm(h.string()), opts);
      std::printf("%s DER %.2f%% (miss %.3f, fa %.3f, conf %.3f, span %.1f s)\n",
                  s.session_id.c_str(), 100.0 * s.report.der, s.report.miss(),
                  s.report.false_alarm(), s.report.confusion(), s.report.span());
      scores.push_back(std::move(s));
    }
    const ganmm::AggregateReport agg = ganmm::aggregate_reports(scores);
    std::printf("mean DER %.2f%% std %.2f%% over %d sessions\n",
                100.0 * agg.mean_der, 100.0 * agg.std_der, agg.sessions);
    for (const auto &b : agg.buckets)
      if (b.sessions > 0)
        std::printf("  %-10s %d sessions, mean DER %.2f%%\n", b.label.c_str(),
                    b.sessions, 100.0 * b.mean_der);
    std::printf("mean_der=%.4f\nstd_der=%.4f\nsessions=%d\n",
                100.0 * agg.mean_der, 100.0 * agg.std_der, agg.sessions);
    return kOk;
  }

  require_file(args.ref, "reference RTTM");
  require_file(args.hyp, "hypothesis RTTM");
  const auto ref = ganmm::load_rttm(args.ref);
  const auto hyp = ganmm::load_rttm(args.hyp);
  const ganmm::DerReport report = ganmm::compute_der(ref, hyp, opts);
  std::cout << ganmm::format_report(report, opts);
  if (args.minority > 0.0) print_minority(ref, hyp, args.minority, report.span());
  return kOk;
}

struct EigArgs {
  std::string embeddings;
  int max_speakers = 10;
};

int run_eig(const EigArgs &args) {
  require_file(args.embeddings, "embeddings file");
  if (args.max_speakers < 2) throw UsageError("--max-speakers must be >= 2");
  const auto stream = ganmm::load_embeddings(args.embeddings);
  const ganmm::Vector lambda =
      ganmm::laplacian_eigenvalues(ganmm::cosine_affinity(stream));
  for (ganmm::Index i = 0; i < lambda.size(); ++i)
    std::printf("%.10f\n", lambda[i]);
  std::printf("# estimated speakers = %d\n",
              ganmm::eigengap_count(lambda, args.max_speakers));
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"GAN mixture model speaker diarization on segment embeddings"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto *cmd_synth = app.add_subcommand("synth", "Generate a synthetic session");
  cmd_synth->add_option("--out", synth.out_dir, "Output directory")->required();
  cmd_synth->add_option("--speakers", synth.spec.n_speakers, "Number of speakers");
  cmd_synth->add_option("--span", synth.spec.session_span, "Session length (s)");
  cmd_synth->add_option("--dim", synth.spec.embedding_dim, "Embedding dimension");
  cmd_synth->add_option("--separation", synth.spec.speaker_separation,
                        "Inter-mean distance over within-speaker std");
  cmd_synth->add_option("--mean-turn", synth.spec.mean_turn, "Mean turn length (s)");
  cmd_synth->add_option("--minority", synth.minority,
                        "Cap one speaker's share of the session (fraction)");
  cmd_synth->add_option("--pause-prob", synth.spec.pause_probability,
                        "Probability of a pause after a turn");
  cmd_synth->add_option("--session-id", synth.spec.session_id, "Session name");
  cmd_synth->add_option("--seed", synth.spec.seed, "Random seed");

  DiarizeArgs diar;
  auto *cmd_diar = app.add_subcommand("diarize", "Diarize one session");
  cmd_diar->add_option("--embeddings", diar.embeddings, "Embeddings file")->required();
  cmd_diar->add_option("--sad", diar.sad, "Speech regions file")->required();
  cmd_diar->add_option("--variant", diar.variant, "p1, p2, p3 or p4");
  cmd_diar->add_option("--speakers", diar.speakers, "Speaker count or 'auto'");
  cmd_diar->add_option("--config", diar.config, "key = value config file");
  cmd_diar->add_option("--seed", diar.seed, "Override the config seed");
  cmd_diar->add_option("--out", diar.out, "Hypothesis RTTM path")->required();
  cmd_diar->add_option("--save-model", diar.save_model,
                       "Directory for network checkpoints");

  ScoreArgs score;
  auto *cmd_score = app.add_subcommand("score", "Diarization error rate");
  cmd_score->add_option("--ref", score.ref, "Reference RTTM file or directory")
      ->required();
  cmd_score->add_option("--hyp", score.hyp, "Hypothesis RTTM file or directory")
      ->required();
  cmd_score->add_option("--collar", score.collar, "Collar in seconds");
  cmd_score->add_flag("--overlap", score.overlap, "Score overlapped speech");
  cmd_score->add_option("--minority", score.minority,
                        "Also report minority speaker error at this threshold");

  EigArgs eig;
  auto *cmd_eig = app.add_subcommand("eig", "Dump Laplacian eigenvalues");
  cmd_eig->add_option("--embeddings", eig.embeddings, "Embeddings file")->required();
  cmd_eig->add_option("--max-speakers", eig.max_speakers, "Eigengap search limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*cmd_synth) return run_synth(synth);
    if (*cmd_diar) return run_diarize(diar);
    if (*cmd_score) return run_score(score);
    if (*cmd_eig) return run_eig(eig);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ganmm::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ganmm::AlgorithmError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAlgorithmFailure;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
