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

#ifndef GANMM_MIXTURE_HPP
#define GANMM_MIXTURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ganmm/common.hpp"
#include "ganmm/nn.hpp"

namespace ganmm {

/// Hyper-parameters of the adversarial mixture. The first block defaults to
/// the published training recipe; the rest are knobs the recipe leaves open.
struct GanmmConfig {
  int n_clusters = 2;
  double learning_rate = 5e-5;
  int batch_size = 50;
  int n_critic = 5;
  double clip = 0.01;
  int pretrain_epochs = 500;
  int em_epochs = 50;

  int noise_dim = 16;
  int hidden_dim = 64;
  int samples_per_generator = 200;
  // Augmented points per cluster at t = 0; unset means max(1, ceil(0.1 n / N)).
  std::optional<int> augment_initial;
  double augment_decay = 0.9;
  // Passes over the generated set per E-step.
  int classifier_passes = 1;
  // train_wgan calls per cluster per M-step.
  int wgan_iters_per_mstep = 1;
  // Stop once this many consecutive E-steps leave the assignment unchanged.
  int stable_iterations = 3;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;
  double init_scale = 0.05;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on an out-of-range field.
  void validate() const;
};

/// N generator/critic pairs plus one classifier, with optimizer state and
/// the random stream that drives all sampling.
struct GanmmModel {
  int data_dim = 0;
  int noise_dim = 0;
  std::vector<Mlp> generators;  // noise_dim -> data_dim, linear
  std::vector<Mlp> critics;     // data_dim -> 1, linear
  Mlp classifier;               // data_dim -> N, softmax
  std::vector<RmsPropState> generator_opt;
  std::vector<RmsPropState> critic_opt;
  RmsPropState classifier_opt;
  Rng rng;

  static GanmmModel create(int data_dim, const GanmmConfig &config);

  int n_clusters() const { return static_cast<int>(generators.size()); }

  /// Uniform noise on [-1, 1]^noise_dim, one row per sample.
  Matrix draw_noise(Index count);

  /// `count` samples from generator `cluster`.
  Matrix sample(int cluster, Index count);
};

/// Hard assignment plus the classifier posteriors it was taken from.
struct Partition {
  std::vector<int> assignment;
  Matrix posteriors;  // n x N, rows sum to one

  Index size() const { return static_cast<Index>(assignment.size()); }

  /// Point indices per cluster, ascending.
  std::vector<std::vector<int>> members(int n_clusters) const;
};

/// Argmax per row with ties going to the lower index.
Partition partition_from_posteriors(Matrix posteriors);

/// Everything recorded while training; enough to audit clipping, label
/// balance and the augmentation schedule after the fact.
struct FitHistory {
  std::vector<int> assignment_changes;   // per E-step, vs previous E-step
  std::vector<double> classifier_loss;   // mean minibatch loss per E-step
  std::vector<std::vector<int>> generated_label_counts;  // per E-step
  std::vector<int> sigma;                // per M-step
  std::vector<std::string> warnings;
  double max_critic_abs_weight = 0.0;    // over every critic update
  long critic_updates = 0;
  long generator_updates = 0;
  int e_steps = 0;
  bool converged = false;
};

struct WganStats {
  double critic_objective = 0.0;  // mean over the critic updates
  double generator_loss = 0.0;
};

/// One critic ascent step on mean D(real) - mean D(G(z)), followed by
/// clipping. Returns the objective on the batch it trained on.
double critic_step(const Mlp &generator, Mlp &critic, RmsPropState &critic_opt,
                   const Matrix &data, const std::vector<int> &rows,
                   const GanmmConfig &config, Rng &rng,
                   FitHistory *history = nullptr);

/// One generator descent step on -mean D(G(z)).
double generator_step(Mlp &generator, const Mlp &critic,
                      RmsPropState &generator_opt, const GanmmConfig &config,
                      Rng &rng, FitHistory *history = nullptr);

/// n_critic critic steps then one generator step, on data rows `rows`.
/// Batches are drawn with replacement only when the cluster is smaller than
/// the batch size.
WganStats train_wgan(Mlp &generator, Mlp &critic, RmsPropState &generator_opt,
                     RmsPropState &critic_opt, const Matrix &data,
                     const std::vector<int> &rows, const GanmmConfig &config,
                     Rng &rng, FitHistory *history = nullptr);

/// Trains every (G_i, D_i) pair for pretrain_epochs on its initial cluster.
/// Throws AlgorithmError when a cluster is empty.
void pretrain(GanmmModel &model, const Matrix &data,
              const std::vector<int> &init_labels, const GanmmConfig &config,
              FitHistory *history = nullptr);

struct GeneratedSet {
  Matrix points;
  std::vector<int> labels;
};

/// samples_per_generator points from every generator, labelled by source.
GeneratedSet sample_generated_set(GanmmModel &model, const GanmmConfig &config);

/// Trains the classifier on freshly generated data, then assigns `data`.
Partition e_step(GanmmModel &model, const Matrix &data,
                 const GanmmConfig &config, FitHistory *history = nullptr);

/// Members of cluster i plus the `sigma` outside points with the highest
/// posterior for i (ties by index). Result sorted ascending.
std::vector<int> augment_cluster(const Partition &partition, int cluster,
                                 int sigma);

/// round(sigma0 * decay^t).
int augmentation_size(int sigma0, double decay, int t);

/// Throws unless sigma0 >= 0 and decay lies in [0, 1), i.e. the schedule is
/// non-increasing with a finite sum.
void validate_sigma_schedule(int sigma0, double decay);

/// max(1, ceil(0.1 n / N)) unless the config overrides it.
int initial_augmentation(const GanmmConfig &config, Index n_points);

void m_step(GanmmModel &model, const Partition &partition, const Matrix &data,
            int t, const GanmmConfig &config, int sigma0,
            FitHistory *history = nullptr);

struct FitResult {
  GanmmModel model;
  Partition partition;
  FitHistory history;
};

/// Pre-training followed by alternating E- and M-steps. Bit-reproducible
/// given (config.seed, data, init_labels).
FitResult fit(const Matrix &data, const GanmmConfig &config,
              const std::vector<int> &init_labels);

/// Classifier decisions for `data` (no training).
Partition classify(const GanmmModel &model, const Matrix &data);

/// Shuffled round-robin labels: a balanced random initial partition.
std::vector<int> random_balanced_labels(Index n, int n_clusters,
                                        std::uint64_t seed);

/// One checkpoint file per network plus manifest.txt in `dir`.
void save_model(const GanmmModel &model, const std::string &dir);
GanmmModel load_model(const std::string &dir, const GanmmConfig &config);

}  // namespace ganmm

#endif  // GANMM_MIXTURE_HPP
