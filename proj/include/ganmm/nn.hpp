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

#ifndef GANMM_NN_HPP
#define GANMM_NN_HPP

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ganmm/common.hpp"

namespace ganmm {

using Rng = std::mt19937_64;

enum class OutputActivation { kLinear, kSoftmax };

/// Parameter blocks of a one-hidden-layer network. Also used for gradients
/// and optimizer accumulators, which share the same shapes.
struct MlpParams {
  Matrix w1;  // hidden x input
  Vector b1;  // hidden
  Matrix w2;  // output x hidden
  Vector b2;  // output

  /// Zero-filled blocks with the same shapes as `like`.
  static MlpParams zeros_like(const MlpParams &like);

  Index size() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
  double max_abs() const;
  bool all_finite() const;
};

/// input -> ReLU(hidden) -> linear or softmax output.
struct Mlp {
  OutputActivation output = OutputActivation::kLinear;
  MlpParams params;

  Mlp() = default;
  Mlp(int input_dim, int hidden_dim, int output_dim, OutputActivation act);

  /// Parameters drawn uniformly from [-scale, scale].
  static Mlp random(int input_dim, int hidden_dim, int output_dim,
                    OutputActivation act, Rng &rng, double scale = 0.05);

  int input_dim() const { return static_cast<int>(params.w1.cols()); }
  int hidden_dim() const { return static_cast<int>(params.w1.rows()); }
  int output_dim() const { return static_cast<int>(params.w2.rows()); }
};

/// Rows of `batch` are samples. Throws on non-finite input or a column
/// count different from the network input width.
Matrix forward(const Mlp &net, const Matrix &batch);

/// Back-propagates `upstream` (d loss / d network output, one row per
/// sample) to the parameters. For softmax networks the upstream gradient is
/// taken with respect to the probabilities. When `input_grad` is non-null
/// it receives d loss / d batch.
MlpParams backward(const Mlp &net, const Matrix &batch, const Matrix &upstream,
                   Matrix *input_grad = nullptr);

/// Same as backward() but `logit_grad` is taken with respect to the output
/// pre-activation, bypassing the softmax Jacobian.
MlpParams backward_logits(const Mlp &net, const Matrix &batch,
                          const Matrix &logit_grad,
                          Matrix *input_grad = nullptr);

/// Mean cross-entropy of a softmax network against integer labels. When
/// `grad` is non-null it receives the parameter gradient of the mean loss.
double cross_entropy(const Mlp &net, const Matrix &batch,
                     const std::vector<int> &labels,
                     MlpParams *grad = nullptr);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix &logits);

struct RmsPropState {
  MlpParams mean_square;
  double decay = 0.9;
  double epsilon = 1e-8;

  RmsPropState() = default;
  RmsPropState(const Mlp &net, double decay = 0.9, double epsilon = 1e-8);
};

/// s <- decay*s + (1-decay)*g^2;  p <- p -/+ lr * g / (sqrt(s) + epsilon).
/// Ascends when `ascent` is set.
void rmsprop_step(MlpParams &params, const MlpParams &grads,
                  RmsPropState &state, double learning_rate, bool ascent);

/// Clamps every parameter into [-clip, clip].
void clip_weights(Mlp &net, double clip);

// Checkpoints: versioned text, shape header, then each block row-major with
// 17 significant digits.
void save_mlp(const Mlp &net, std::ostream &out);
Mlp load_mlp(std::istream &in, const std::string &source = "<stream>");
void save_mlp(const Mlp &net, const std::string &path);
Mlp load_mlp(const std::string &path);

}  // namespace ganmm

#endif  // GANMM_NN_HPP
