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

#include "ganmm/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace ganmm {

namespace {

Matrix gather_rows(const Matrix &data, const std::vector<int> &rows) {
  Matrix out(static_cast<Index>(rows.size()), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Index>(i)) = data.row(rows[i]);
  return out;
}

std::vector<int> sample_batch_rows(const std::vector<int> &rows, int m,
                                   Rng &rng) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m));
  if (rows.size() < static_cast<std::size_t>(m)) {
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    for (int i = 0; i < m; ++i) out.push_back(rows[pick(rng)]);
    return out;
  }
  // Partial Fisher-Yates: m distinct rows.
  std::vector<int> pool = rows;
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(
        static_cast<std::size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

Matrix uniform_noise(Index count, int dim, Rng &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix z(count, dim);
  for (Index c = 0; c < z.cols(); ++c)
    for (Index r = 0; r < z.rows(); ++r) z(r, c) = u(rng);
  return z;
}

void note_critic(const Mlp &critic, FitHistory *history) {
  if (history == nullptr) return;
  ++history->critic_updates;
  history->max_critic_abs_weight =
      std::max(history->max_critic_abs_weight, critic.params.max_abs());
}

}  // namespace

void GanmmConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw std::invalid_argument(std::string("GanmmConfig: ") + what);
  };
  require(n_clusters >= 2, "n_clusters must be >= 2");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(n_critic >= 1, "n_critic must be >= 1");
  require(clip > 0.0, "clip must be > 0");
  require(pretrain_epochs >= 0, "pretrain_epochs must be >= 0");
  require(em_epochs >= 0, "em_epochs must be >= 0");
  require(noise_dim >= 1, "noise_dim must be >= 1");
  require(hidden_dim >= 1, "hidden_dim must be >= 1");
  require(samples_per_generator >= 1, "samples_per_generator must be >= 1");
  require(!augment_initial || *augment_initial >= 0,
          "augment_initial must be >= 0");
  require(augment_decay >= 0.0 && augment_decay < 1.0,
          "augment_decay must lie in [0, 1)");
  require(classifier_passes >= 1, "classifier_passes must be >= 1");
  require(wgan_iters_per_mstep >= 1, "wgan_iters_per_mstep must be >= 1");
  require(stable_iterations >= 1, "stable_iterations must be >= 1");
  require(rmsprop_decay > 0.0 && rmsprop_decay < 1.0,
          "rmsprop_decay must lie in (0, 1)");
  require(rmsprop_epsilon > 0.0, "rmsprop_epsilon must be > 0");
  require(init_scale > 0.0, "init_scale must be > 0");
}

GanmmModel GanmmModel::create(int data_dim, const GanmmConfig &config) {
  config.validate();
  if (data_dim < 1) throw std::invalid_argument("data dimension must be >= 1");
  GanmmModel m;
  m.data_dim = data_dim;
  m.noise_dim = config.noise_dim;
  m.rng.seed(config.seed);
  const int n = config.n_clusters;
  for (int i = 0; i < n; ++i) {
    m.generators.push_back(Mlp::random(config.noise_dim, config.hidden_dim,
                                       data_dim, OutputActivation::kLinear,
                                       m.rng, config.init_scale));
    m.critics.push_back(Mlp::random(data_dim, config.hidden_dim, 1,
                                    OutputActivation::kLinear, m.rng,
                                    config.init_scale));
    m.generator_opt.emplace_back(m.generators.back(), config.rmsprop_decay,
                                 config.rmsprop_epsilon);
    m.critic_opt.emplace_back(m.critics.back(), config.rmsprop_decay,
                              config.rmsprop_epsilon);
  }
  m.classifier = Mlp::random(data_dim, config.hidden_dim, n,
                             OutputActivation::kSoftmax, m.rng,
                             config.init_scale);
  m.classifier_opt = RmsPropState(m.classifier, config.rmsprop_decay,
                                  config.rmsprop_epsilon);
  return m;
}

Matrix GanmmModel::draw_noise(Index count) {
  return uniform_noise(count, noise_dim, rng);
}

Matrix GanmmModel::sample(int cluster, Index count) {
  return forward(generators.at(static_cast<std::size_t>(cluster)),
                 draw_noise(count));
}

std::vector<std::vector<int>> Partition::members(int n_clusters) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_clusters));
  for (std::size_t j = 0; j < assignment.size(); ++j)
    out.at(static_cast<std::size_t>(assignment[j]))
        .push_back(static_cast<int>(j));
  return out;
}

Partition partition_from_posteriors(Matrix posteriors) {
  Partition p;
  p.assignment.resize(static_cast<std::size_t>(posteriors.rows()));
  for (Index r = 0; r < posteriors.rows(); ++r) {
    Index best = 0;
    for (Index c = 1; c < posteriors.cols(); ++c)
      if (posteriors(r, c) > posteriors(r, best)) best = c;
    p.assignment[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  p.posteriors = std::move(posteriors);
  return p;
}

double critic_step(const Mlp &generator, Mlp &critic, RmsPropState &critic_opt,
                   const Matrix &data, const std::vector<int> &rows,
                   const GanmmConfig &config, Rng &rng, FitHistory *history) {
  if (rows.empty()) throw std::invalid_argument("critic_step: empty cluster");
  const int m = config.batch_size;
  const Matrix real = gather_rows(data, sample_batch_rows(rows, m, rng));
  const Matrix fake =
      forward(generator, uniform_noise(m, generator.input_dim(), rng));

  Matrix both(2 * m, data.cols());
  both.topRows(m) = real;
  both.bottomRows(m) = fake;
  const Matrix scores = forward(critic, both);
  const double objective =
      scores.topRows(m).mean() - scores.bottomRows(m).mean();

  Matrix upstream(2 * m, 1);
  upstream.topRows(m).setConstant(1.0 / m);
  upstream.bottomRows(m).setConstant(-1.0 / m);
  const MlpParams grad = backward(critic, both, upstream);
  rmsprop_step(critic.params, grad, critic_opt, config.learning_rate,
               /*ascent=*/true);
  clip_weights(critic, config.clip);
  note_critic(critic, history);
  return objective;
}

double generator_step(Mlp &generator, const Mlp &critic,
                      RmsPropState &generator_opt, const GanmmConfig &config,
                      Rng &rng, FitHistory *history) {
  const int m = config.batch_size;
  const Matrix z = uniform_noise(m, generator.input_dim(), rng);
  const Matrix fake = forward(generator, z);
  const double loss = -forward(critic, fake).mean();

  Matrix d_fake;
  backward(critic, fake, Matrix::Constant(m, 1, -1.0 / m), &d_fake);
  const MlpParams grad = backward(generator, z, d_fake);
  rmsprop_step(generator.params, grad, generator_opt, config.learning_rate,
               /*ascent=*/false);
  if (history != nullptr) ++history->generator_updates;
  return loss;
}

WganStats train_wgan(Mlp &generator, Mlp &critic, RmsPropState &generator_opt,
                     RmsPropState &critic_opt, const Matrix &data,
                     const std::vector<int> &rows, const GanmmConfig &config,
                     Rng &rng, FitHistory *history) {
  WganStats stats;
  for (int c = 0; c < config.n_critic; ++c)
    stats.critic_objective += critic_step(generator, critic, critic_opt, data,
                                          rows, config, rng, history);
  stats.critic_objective /= config.n_critic;
  stats.generator_loss =
      generator_step(generator, critic, generator_opt, config, rng, history);
  return stats;
}

void pretrain(GanmmModel &model, const Matrix &data,
              const std::vector<int> &init_labels, const GanmmConfig &config,
              FitHistory *history) {
  const int n_clusters = model.n_clusters();
  if (static_cast<Index>(init_labels.size()) != data.rows())
    throw std::invalid_argument("pretrain: one initial label per point needed");
  std::vector<std::vector<int>> clusters(static_cast<std::size_t>(n_clusters));
  for (std::size_t j = 0; j < init_labels.size(); ++j) {
    const int l = init_labels[j];
    if (l < 0 || l >= n_clusters)
      throw std::invalid_argument("pretrain: initial label out of range");
    clusters[static_cast<std::size_t>(l)].push_back(static_cast<int>(j));
  }
  for (int i = 0; i < n_clusters; ++i)
    if (clusters[static_cast<std::size_t>(i)].empty())
      throw AlgorithmError("pretrain: initial cluster " + std::to_string(i) +
                           " is empty; re-initialize the partition");

  for (int epoch = 0; epoch < config.pretrain_epochs; ++epoch)
    for (int i = 0; i < n_clusters; ++i) {
      const auto k = static_cast<std::size_t>(i);
      train_wgan(model.generators[k], model.critics[k], model.generator_opt[k],
                 model.critic_opt[k], data, clusters[k], config, model.rng,
                 history);
    }
}

GeneratedSet sample_generated_set(GanmmModel &model,
                                  const GanmmConfig &config) {
  const Index per = config.samples_per_generator;
  const int n_clusters = model.n_clusters();
  GeneratedSet set;
  set.points.resize(per * n_clusters, model.data_dim);
  set.labels.reserve(static_cast<std::size_t>(per * n_clusters));
  for (int i = 0; i < n_clusters; ++i) {
    set.points.middleRows(i * per, per) = model.sample(i, per);
    set.labels.insert(set.labels.end(), static_cast<std::size_t>(per), i);
  }
  return set;
}

Partition e_step(GanmmModel &model, const Matrix &data,
                 const GanmmConfig &config, FitHistory *history) {
  const GeneratedSet set = sample_generated_set(model, config);
  if (history != nullptr) {
    std::vector<int> counts(static_cast<std::size_t>(model.n_clusters()), 0);
    for (int l : set.labels) ++counts[static_cast<std::size_t>(l)];
    history->generated_label_counts.push_back(std::move(counts));
  }

  const std::size_t total = set.labels.size();
  std::vector<int> order(total);
  double loss_sum = 0.0;
  int batches = 0;
  for (int pass = 0; pass < config.classifier_passes; ++pass) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), model.rng);
    for (std::size_t begin = 0; begin < total;
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(total, begin + static_cast<std::size_t>(config.batch_size));
      std::vector<int> rows(order.begin() + static_cast<long>(begin),
                            order.begin() + static_cast<long>(end));
      std::vector<int> labels;
      labels.reserve(rows.size());
      for (int r : rows) labels.push_back(set.labels[static_cast<std::size_t>(r)]);
      MlpParams grad;
      loss_sum += cross_entropy(model.classifier, gather_rows(set.points, rows),
                                labels, &grad);
      ++batches;
      rmsprop_step(model.classifier.params, grad, model.classifier_opt,
                   config.learning_rate, /*ascent=*/false);
    }
  }
  if (history != nullptr) {
    history->classifier_loss.push_back(batches ? loss_sum / batches : 0.0);
    ++history->e_steps;
  }
  return classify(model, data);
}

std::vector<int> augment_cluster(const Partition &partition, int cluster,
                                 int sigma) {
  if (sigma < 0) throw std::invalid_argument("augment_cluster: sigma < 0");
  if (cluster < 0 || cluster >= partition.posteriors.cols())
    throw std::invalid_argument("augment_cluster: cluster out of range");
  std::vector<int> inside, outside;
  for (std::size_t j = 0; j < partition.assignment.size(); ++j)
    (partition.assignment[j] == cluster ? inside : outside)
        .push_back(static_cast<int>(j));
  const std::size_t take =
      std::min(outside.size(), static_cast<std::size_t>(sigma));
  std::partial_sort(outside.begin(), outside.begin() + static_cast<long>(take),
                    outside.end(), [&](int a, int b) {
                      const double pa = partition.posteriors(a, cluster);
                      const double pb = partition.posteriors(b, cluster);
                      return pa != pb ? pa > pb : a < b;
                    });
  inside.insert(inside.end(), outside.begin(),
                outside.begin() + static_cast<long>(take));
  std::sort(inside.begin(), inside.end());
  return inside;
}

int augmentation_size(int sigma0, double decay, int t) {
  validate_sigma_schedule(sigma0, decay);
  if (t < 0) throw std::invalid_argument("augmentation_size: t < 0");
  return static_cast<int>(std::lround(sigma0 * std::pow(decay, t)));
}

void validate_sigma_schedule(int sigma0, double decay) {
  if (sigma0 < 0) throw std::invalid_argument("sigma0 must be >= 0");
  if (!(decay >= 0.0 && decay < 1.0))
    throw std::invalid_argument(
        "augmentation decay must lie in [0, 1) for a summable schedule");
}

int initial_augmentation(const GanmmConfig &config, Index n_points) {
  if (config.augment_initial) return *config.augment_initial;
  const double raw = std::ceil(0.1 * static_cast<double>(n_points) /
                               static_cast<double>(config.n_clusters));
  return std::max(1, static_cast<int>(raw));
}

void m_step(GanmmModel &model, const Partition &partition, const Matrix &data,
            int t, const GanmmConfig &config, int sigma0,
            FitHistory *history) {
  const int sigma = augmentation_size(sigma0, config.augment_decay, t);
  if (history != nullptr) history->sigma.push_back(sigma);
  for (int i = 0; i < model.n_clusters(); ++i) {
    const std::vector<int> rows = augment_cluster(partition, i, sigma);
    if (rows.empty()) {
      if (history != nullptr)
        history->warnings.push_back("m-step " + std::to_string(t) +
                                    ": cluster " + std::to_string(i) +
                                    " is empty, skipped");
      continue;
    }
    const auto k = static_cast<std::size_t>(i);
    for (int it = 0; it < config.wgan_iters_per_mstep; ++it)
      train_wgan(model.generators[k], model.critics[k], model.generator_opt[k],
                 model.critic_opt[k], data, rows, config, model.rng, history);
  }
}

FitResult fit(const Matrix &data, const GanmmConfig &config,
              const std::vector<int> &init_labels) {
  config.validate();
  if (data.rows() < config.n_clusters)
    throw std::invalid_argument("fit: fewer points than clusters");
  if (!data.allFinite()) throw std::invalid_argument("fit: non-finite data");

  FitResult result{GanmmModel::create(static_cast<int>(data.cols()), config),
                   {}, {}};
  FitHistory &history = result.history;
  pretrain(result.model, data, init_labels, config, &history);

  const int sigma0 = initial_augmentation(config, data.rows());
  validate_sigma_schedule(sigma0, config.augment_decay);

  result.partition = e_step(result.model, data, config, &history);
  int stable = 0;
  for (int t = 1; t <= config.em_epochs; ++t) {
    if (t > 1) {
      Partition next = e_step(result.model, data, config, &history);
      int changes = 0;
      for (std::size_t j = 0; j < next.assignment.size(); ++j)
        changes += next.assignment[j] != result.partition.assignment[j];
      history.assignment_changes.push_back(changes);
      result.partition = std::move(next);
      // A partition with an empty cluster is a collapse, not convergence.
      const auto sizes = result.partition.members(config.n_clusters);
      const bool collapsed = std::any_of(sizes.begin(), sizes.end(),
                                         [](const auto &m) { return m.empty(); });
      stable = changes == 0 && !collapsed ? stable + 1 : 0;
      if (stable >= config.stable_iterations) {
        history.converged = true;
        break;
      }
    }
    m_step(result.model, result.partition, data, t, config, sigma0, &history);
  }
  return result;
}

Partition classify(const GanmmModel &model, const Matrix &data) {
  if (data.cols() != model.data_dim)
    throw std::invalid_argument("classify: data dimension mismatch");
  return partition_from_posteriors(forward(model.classifier, data));
}

std::vector<int> random_balanced_labels(Index n, int n_clusters,
                                        std::uint64_t seed) {
  if (n_clusters < 1) throw std::invalid_argument("n_clusters must be >= 1");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i)
    labels[static_cast<std::size_t>(order[i])] =
        static_cast<int>(i % static_cast<std::size_t>(n_clusters));
  return labels;
}

void save_model(const GanmmModel &model, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir);
  manifest << "ganmm-model 1\n";
  manifest << "clusters " << model.n_clusters() << '\n';
  manifest << "data_dim " << model.data_dim << '\n';
  manifest << "noise_dim " << model.noise_dim << '\n';
  for (int i = 0; i < model.n_clusters(); ++i) {
    const std::string g = "generator_" + std::to_string(i) + ".mlp";
    const std::string c = "critic_" + std::to_string(i) + ".mlp";
    save_mlp(model.generators[static_cast<std::size_t>(i)],
             (fs::path(dir) / g).string());
    save_mlp(model.critics[static_cast<std::size_t>(i)],
             (fs::path(dir) / c).string());
    manifest << "generator " << g << '\n' << "critic " << c << '\n';
  }
  save_mlp(model.classifier, (fs::path(dir) / "classifier.mlp").string());
  manifest << "classifier classifier.mlp\n";
}

GanmmModel load_model(const std::string &dir, const GanmmConfig &config) {
  namespace fs = std::filesystem;
  const std::string path = (fs::path(dir) / "manifest.txt").string();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string tag;
  int version = 0, n = 0;
  GanmmModel m;
  if (!(in >> tag >> version) || tag != "ganmm-model" || version != 1)
    throw ParseError(path, 1, "not a ganmm-model manifest");
  if (!(in >> tag >> n) || tag != "clusters" || n < 2)
    throw ParseError(path, 2, "bad cluster count");
  if (!(in >> tag >> m.data_dim) || tag != "data_dim")
    throw ParseError(path, 3, "bad data_dim");
  if (!(in >> tag >> m.noise_dim) || tag != "noise_dim")
    throw ParseError(path, 4, "bad noise_dim");
  std::string file;
  while (in >> tag >> file) {
    const Mlp net = load_mlp((fs::path(dir) / file).string());
    if (tag == "generator")
      m.generators.push_back(net);
    else if (tag == "critic")
      m.critics.push_back(net);
    else if (tag == "classifier")
      m.classifier = net;
    else
      throw ParseError(path, 0, "unknown manifest entry '" + tag + "'");
  }
  if (static_cast<int>(m.generators.size()) != n ||
      static_cast<int>(m.critics.size()) != n ||
      m.classifier.output_dim() != n || m.classifier.input_dim() != m.data_dim)
    throw ParseError(path, 0, "manifest does not describe a complete model");
  for (int i = 0; i < n; ++i) {
    m.generator_opt.emplace_back(m.generators[static_cast<std::size_t>(i)],
                                 config.rmsprop_decay, config.rmsprop_epsilon);
    m.critic_opt.emplace_back(m.critics[static_cast<std::size_t>(i)],
                              config.rmsprop_decay, config.rmsprop_epsilon);
  }
  m.classifier_opt = RmsPropState(m.classifier, config.rmsprop_decay,
                                  config.rmsprop_epsilon);
  m.rng.seed(config.seed);
  return m;
}

}  // namespace ganmm
