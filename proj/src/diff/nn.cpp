// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/diff/nn.hpp"

#include <cmath>

#include "genn/common/error.hpp"

namespace genn::diff {

ParamList trainable(const ParamList& params) {
  ParamList out;
  for (const auto& p : params) {
    if (p.role == ParamRole::kTrainable) out.push_back(p);
  }
  return out;
}

NodeId ParamBinder::operator()(const Tensor& param) {
  auto it = bound_.find(&param);
  if (it != bound_.end()) return it->second;
  const NodeId id = tape_->variable(param);
  bound_.emplace(&param, id);
  return id;
}

Tensor ParamBinder::gradient(const Tensor& param, const Gradients& grads) const {
  auto it = bound_.find(&param);
  if (it == bound_.end()) return Tensor(param.rows(), param.cols());
  return grads[it->second];
}

std::vector<Tensor> ParamBinder::gradients(const ParamList& params,
                                           const Gradients& grads) const {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(gradient(*p.tensor, grads));
  return out;
}

void glorot_fill(Tensor& t, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.data()) v = dist(rng);
}

Linear Linear::glorot(std::size_t in, std::size_t out, Rng& rng) {
  Linear layer(in, out);
  glorot_fill(layer.weight, rng);
  return layer;
}

NodeId Linear::forward(Context& ctx, NodeId x) const {
  const NodeId xw = ctx.tape.matmul_bt(x, ctx.bind(weight));
  return ctx.tape.add_bias(xw, ctx.bind(bias));
}

BatchNorm::BatchNorm(std::size_t features)
    : gamma(1, features, 1.0),
      beta(1, features, 0.0),
      running_mean(1, features, 0.0),
      running_var(1, features, 1.0) {}

BatchNormStats BatchNorm::running() const {
  return {std::vector<double>(running_mean.data().begin(), running_mean.data().end()),
          std::vector<double>(running_var.data().begin(), running_var.data().end())};
}

NodeId BatchNorm::forward(Context& ctx, NodeId x) const {
  if (ctx.training) {
    const NodeId node = ctx.tape.batch_norm_train(x, ctx.bind(gamma), ctx.bind(beta));
    ctx.batch_norm_nodes.emplace_back(this, node);
    return node;
  }
  return ctx.tape.batch_norm_infer(x, ctx.bind(gamma), ctx.bind(beta), running());
}

void BatchNorm::absorb(const Tape& tape, NodeId node, double momentum) {
  const BatchNormStats& batch = tape.batch_stats(node);
  for (std::size_t c = 0; c < features(); ++c) {
    running_mean[c] = momentum * running_mean[c] + (1.0 - momentum) * batch.mean[c];
    running_var[c] = momentum * running_var[c] + (1.0 - momentum) * batch.var[c];
  }
}

void BatchNorm::absorb_all(const Context& ctx, double momentum) {
  for (const auto& [layer, node] : ctx.batch_norm_nodes) {
    if (layer == this) absorb(ctx.tape, node, momentum);
  }
}

void Adam::step(const ParamList& params, const std::vector<Tensor>& grads) {
  if (params.size() != grads.size()) {
    fail(ErrorCode::kInvalidArgument, "Adam::step parameter/gradient count mismatch");
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.tensor->rows(), p.tensor->cols());
      v_.emplace_back(p.tensor->rows(), p.tensor->cols());
    }
  }
  if (m_.size() != params.size()) {
    fail(ErrorCode::kInvalidArgument, "Adam::step called with a different parameter list");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = *params[k].tensor;
    const Tensor& g = grads[k];
    if (!g.same_shape(p)) {
      fail(ErrorCode::kShapeMismatch, "Adam::step gradient shape " + g.shape_string() +
                                          " vs parameter " + p.shape_string());
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      m_[k][i] = beta1_ * m_[k][i] + (1.0 - beta1_) * g[i];
      v_[k][i] = beta2_ * v_[k][i] + (1.0 - beta2_) * g[i] * g[i];
      p[i] -= lr_ * (m_[k][i] / c1) / (std::sqrt(v_[k][i] / c2) + eps_);
    }
  }
}

double global_norm(const std::vector<Tensor>& grads) {
  double total = 0.0;
  for (const auto& g : grads) {
    for (double v : g.data()) total += v * v;
  }
  return std::sqrt(total);
}

double clip_global_norm(std::vector<Tensor>& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (max_norm > 0.0 && norm > max_norm) {
    const double k = max_norm / norm;
    for (auto& g : grads) {
      for (double& v : g.data()) v *= k;
    }
  }
  return norm;
}

Tensor flatten(const ParamList& params) {
  std::vector<double> data;
  for (const auto& p : params) data.insert(data.end(), p.tensor->data().begin(), p.tensor->data().end());
  const std::size_t n = data.size();
  return Tensor(1, n, std::move(data));
}

void unflatten(const Tensor& flat, const ParamList& params) {
  std::size_t offset = 0;
  for (const auto& p : params) {
    for (double& v : p.tensor->data()) {
      if (offset >= flat.size()) fail(ErrorCode::kShapeMismatch, "unflatten: vector too short");
      v = flat[offset++];
    }
  }
  if (offset != flat.size()) fail(ErrorCode::kShapeMismatch, "unflatten: vector too long");
}

}  // namespace genn::diff
