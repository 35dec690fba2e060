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

#include "ganmm/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ganmm {

namespace {

template <typename Block>
void fill_uniform(Block &b, Rng &rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (Index i = 0; i < b.size(); ++i) b.data()[i] = u(rng);
}

template <typename Block, typename F>
void for_each_value(Block &b, F &&f) {
  for (Index i = 0; i < b.size(); ++i) f(b.data()[i]);
}

template <typename F>
void for_each_block(MlpParams &p, F &&f) {
  f(p.w1);
  f(p.b1);
  f(p.w2);
  f(p.b2);
}

template <typename F>
void for_each_block(const MlpParams &p, F &&f) {
  f(p.w1);
  f(p.b1);
  f(p.w2);
  f(p.b2);
}

Matrix hidden_pre(const Mlp &net, const Matrix &batch) {
  return (batch * net.params.w1.transpose()).rowwise() +
         net.params.b1.transpose();
}

Matrix logits_from_hidden(const Mlp &net, const Matrix &hidden) {
  return (hidden * net.params.w2.transpose()).rowwise() +
         net.params.b2.transpose();
}

void check_batch(const Mlp &net, const Matrix &batch) {
  if (batch.cols() != net.input_dim())
    throw std::invalid_argument("batch has " + std::to_string(batch.cols()) +
                                " columns, network expects " +
                                std::to_string(net.input_dim()));
  if (!batch.allFinite())
    throw std::invalid_argument("non-finite network input");
}

const char *activation_name(OutputActivation a) {
  return a == OutputActivation::kSoftmax ? "softmax" : "linear";
}

}  // namespace

MlpParams MlpParams::zeros_like(const MlpParams &like) {
  MlpParams z;
  z.w1 = Matrix::Zero(like.w1.rows(), like.w1.cols());
  z.b1 = Vector::Zero(like.b1.size());
  z.w2 = Matrix::Zero(like.w2.rows(), like.w2.cols());
  z.b2 = Vector::Zero(like.b2.size());
  return z;
}

double MlpParams::max_abs() const {
  double m = 0.0;
  for_each_block(*this, [&](const auto &b) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  });
  return m;
}

bool MlpParams::all_finite() const {
  bool ok = true;
  for_each_block(*this, [&](const auto &b) { ok = ok && b.allFinite(); });
  return ok;
}

Mlp::Mlp(int input_dim, int hidden_dim, int output_dim, OutputActivation act)
    : output(act) {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
    throw std::invalid_argument("network dimensions must be positive");
  params.w1 = Matrix::Zero(hidden_dim, input_dim);
  params.b1 = Vector::Zero(hidden_dim);
  params.w2 = Matrix::Zero(output_dim, hidden_dim);
  params.b2 = Vector::Zero(output_dim);
}

Mlp Mlp::random(int input_dim, int hidden_dim, int output_dim,
                OutputActivation act, Rng &rng, double scale) {
  Mlp net(input_dim, hidden_dim, output_dim, act);
  for_each_block(net.params, [&](auto &b) { fill_uniform(b, rng, scale); });
  return net;
}

Matrix softmax_rows(const Matrix &logits) {
  Matrix p = logits.colwise() - logits.rowwise().maxCoeff();
  p = p.array().exp().matrix();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

Matrix forward(const Mlp &net, const Matrix &batch) {
  check_batch(net, batch);
  const Matrix hidden = hidden_pre(net, batch).cwiseMax(0.0);
  Matrix out = logits_from_hidden(net, hidden);
  if (net.output == OutputActivation::kSoftmax) return softmax_rows(out);
  return out;
}

MlpParams backward_logits(const Mlp &net, const Matrix &batch,
                          const Matrix &logit_grad, Matrix *input_grad) {
  check_batch(net, batch);
  if (logit_grad.rows() != batch.rows() ||
      logit_grad.cols() != net.output_dim())
    throw std::invalid_argument("upstream gradient shape mismatch");

  const Matrix pre = hidden_pre(net, batch);
  const Matrix hidden = pre.cwiseMax(0.0);

  MlpParams g;
  g.w2 = logit_grad.transpose() * hidden;
  g.b2 = logit_grad.colwise().sum().transpose();
  Matrix d_hidden = logit_grad * net.params.w2;
  d_hidden = d_hidden.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  g.w1 = d_hidden.transpose() * batch;
  g.b1 = d_hidden.colwise().sum().transpose();
  if (input_grad != nullptr) *input_grad = d_hidden * net.params.w1;
  return g;
}

MlpParams backward(const Mlp &net, const Matrix &batch, const Matrix &upstream,
                   Matrix *input_grad) {
  if (net.output == OutputActivation::kLinear)
    return backward_logits(net, batch, upstream, input_grad);
  const Matrix p = forward(net, batch);
  if (upstream.rows() != p.rows() || upstream.cols() != p.cols())
    throw std::invalid_argument("upstream gradient shape mismatch");
  // softmax Jacobian-vector product: p * (g - <g, p>)
  const Vector inner = upstream.cwiseProduct(p).rowwise().sum();
  const Matrix dz = p.cwiseProduct(upstream.colwise() - inner);
  return backward_logits(net, batch, dz, input_grad);
}

double cross_entropy(const Mlp &net, const Matrix &batch,
                     const std::vector<int> &labels, MlpParams *grad) {
  if (net.output != OutputActivation::kSoftmax)
    throw std::invalid_argument("cross_entropy requires a softmax network");
  if (static_cast<Index>(labels.size()) != batch.rows())
    throw std::invalid_argument("label count differs from batch rows");
  if (batch.rows() == 0) throw std::invalid_argument("empty batch");
  check_batch(net, batch);

  const Matrix hidden = hidden_pre(net, batch).cwiseMax(0.0);
  const Matrix logits = logits_from_hidden(net, hidden);
  const Vector row_max = logits.rowwise().maxCoeff();
  const Matrix shifted = logits.colwise() - row_max;
  const Vector log_norm = shifted.array().exp().rowwise().sum().log().matrix();

  const double inv_b = 1.0 / static_cast<double>(batch.rows());
  double loss = 0.0;
  for (Index r = 0; r < batch.rows(); ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= net.output_dim())
      throw std::invalid_argument("label out of range");
    loss += log_norm[r] - shifted(r, y);
  }
  loss *= inv_b;

  if (grad != nullptr) {
    Matrix dz = (shifted.colwise() - log_norm).array().exp().matrix();
    for (Index r = 0; r < batch.rows(); ++r)
      dz(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
    dz *= inv_b;
    *grad = backward_logits(net, batch, dz);
  }
  return loss;
}

RmsPropState::RmsPropState(const Mlp &net, double decay_, double epsilon_)
    : mean_square(MlpParams::zeros_like(net.params)),
      decay(decay_),
      epsilon(epsilon_) {
  if (!(decay > 0.0 && decay < 1.0))
    throw std::invalid_argument("RMSProp decay must lie in (0, 1)");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("RMSProp epsilon must be positive");
}

void rmsprop_step(MlpParams &params, const MlpParams &grads,
                  RmsPropState &state, double learning_rate, bool ascent) {
  const double sign = ascent ? 1.0 : -1.0;
  const double rho = state.decay;
  const double eps = state.epsilon;
  auto update = [&](auto &p, const auto &g, auto &s) {
    if (p.rows() != g.rows() || p.cols() != g.cols() || p.rows() != s.rows() ||
        p.cols() != s.cols())
      throw std::invalid_argument("rmsprop_step: shape mismatch");
    s.array() = rho * s.array() + (1.0 - rho) * g.array().square();
    p.array() += sign * learning_rate * g.array() / (s.array().sqrt() + eps);
  };
  update(params.w1, grads.w1, state.mean_square.w1);
  update(params.b1, grads.b1, state.mean_square.b1);
  update(params.w2, grads.w2, state.mean_square.w2);
  update(params.b2, grads.b2, state.mean_square.b2);
}

void clip_weights(Mlp &net, double clip) {
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be positive");
  for_each_block(net.params, [&](auto &b) {
    for_each_value(b, [&](double &v) { v = std::clamp(v, -clip, clip); });
  });
}

void save_mlp(const Mlp &net, std::ostream &out) {
  out << "ganmm-mlp 1\n";
  out << "shape " << net.input_dim() << ' ' << net.hidden_dim() << ' '
      << net.output_dim() << ' ' << activation_name(net.output) << '\n';
  out << std::setprecision(17);
  auto dump_matrix = [&](const char *name, const Matrix &m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << m(r, c);
      }
      out << '\n';
    }
  };
  auto dump_vector = [&](const char *name, const Vector &v) {
    out << name << ' ' << v.size() << '\n';
    for (Index i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << v[i];
    }
    out << '\n';
  };
  dump_matrix("w1", net.params.w1);
  dump_vector("b1", net.params.b1);
  dump_matrix("w2", net.params.w2);
  dump_vector("b2", net.params.b2);
}

Mlp load_mlp(std::istream &in, const std::string &source) {
  auto fail = [&](const std::string &what) -> Mlp {
    throw ParseError(source, 0, what);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "ganmm-mlp")
    return fail("not a ganmm-mlp checkpoint");
  if (version != 1) return fail("unsupported checkpoint version");
  int din = 0, dh = 0, dout = 0;
  std::string act;
  if (!(in >> tag >> din >> dh >> dout >> act) || tag != "shape")
    return fail("missing shape header");
  if (act != "linear" && act != "softmax")
    return fail("unknown output activation '" + act + "'");
  Mlp net(din, dh, dout,
          act == "softmax" ? OutputActivation::kSoftmax
                           : OutputActivation::kLinear);

  auto read_matrix = [&](const char *name, Matrix &m) {
    Index rows = 0, cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != name || rows != m.rows() ||
        cols != m.cols())
      fail(std::string("bad header for block ") + name);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        if (!(in >> m(r, c))) fail(std::string("truncated block ") + name);
  };
  auto read_vector = [&](const char *name, Vector &v) {
    Index n = 0;
    if (!(in >> tag >> n) || tag != name || n != v.size())
      fail(std::string("bad header for block ") + name);
    for (Index i = 0; i < n; ++i)
      if (!(in >> v[i])) fail(std::string("truncated block ") + name);
  };
  read_matrix("w1", net.params.w1);
  read_vector("b1", net.params.b1);
  read_matrix("w2", net.params.w2);
  read_vector("b2", net.params.b2);
  if (!net.params.all_finite()) fail("non-finite parameter");
  return net;
}

void save_mlp(const Mlp &net, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_mlp(net, out);
}

Mlp load_mlp(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_mlp(in, path);
}

}  // namespace ganmm
