// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genn/common/rng.hpp"
#include "genn/diff/tape.hpp"
#include "genn/diff/tensor.hpp"

namespace genn::diff {

/// Whether a tensor is updated by the optimizer or carried along as state
/// (batch-norm running statistics).
enum class ParamRole { kTrainable, kState };

struct NamedParam {
  std::string name;
  Tensor* tensor;
  ParamRole role;
};
struct ConstNamedParam {
  std::string name;
  const Tensor* tensor;
  ParamRole role;
};
using ParamList = std::vector<NamedParam>;
using ConstParamList = std::vector<ConstNamedParam>;

inline std::string join_name(std::string_view prefix, std::string_view name) {
  if (prefix.empty()) return std::string(name);
  std::string out(prefix);
  out += '.';
  out += name;
  return out;
}

/// Collects every tensor of a model that exposes
/// `template <class Self, class Fn> static void visit(Self&, std::string_view, Fn&&)`.
template <class Model>
ParamList parameters_of(Model& model, std::string_view prefix = {}) {
  ParamList out;
  Model::visit(model, prefix, [&](std::string name, Tensor& t, ParamRole role) {
    out.push_back({std::move(name), &t, role});
  });
  return out;
}
template <class Model>
ConstParamList parameters_of(const Model& model, std::string_view prefix = {}) {
  ConstParamList out;
  Model::visit(model, prefix, [&](std::string name, const Tensor& t, ParamRole role) {
    out.push_back({std::move(name), &t, role});
  });
  return out;
}

ParamList trainable(const ParamList& params);

/// Registers parameter tensors as tape leaves once per tape and maps
/// gradients back to them by address.
class ParamBinder {
 public:
  explicit ParamBinder(Tape& tape) : tape_(&tape) {}

  NodeId operator()(const Tensor& param);
  Tape& tape() { return *tape_; }

  Tensor gradient(const Tensor& param, const Gradients& grads) const;
  std::vector<Tensor> gradients(const ParamList& params, const Gradients& grads) const;

 private:
  Tape* tape_;
  std::unordered_map<const Tensor*, NodeId> bound_;
};

class BatchNorm;

/// Per-forward context: the tape, parameter bindings, and whether
/// normalization layers use batch statistics.
struct Context {
  explicit Context(Tape& t, bool train = false) : tape(t), bind(t), training(train) {}

  Tape& tape;
  ParamBinder bind;
  bool training;
  std::vector<std::pair<const BatchNorm*, NodeId>> batch_norm_nodes;
};

/// Dense affine layer y = x·Wᵀ + b with W stored out×in.
struct Linear {
  Tensor weight;
  Tensor bias;

  Linear() = default;
  Linear(std::size_t in, std::size_t out) : weight(out, in), bias(1, out) {}

  /// Uniform in ±sqrt(6/(fan_in+fan_out)); bias zero.
  static Linear glorot(std::size_t in, std::size_t out, Rng& rng);

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }

  NodeId forward(Context& ctx, NodeId x) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    fn(join_name(prefix, "weight"), self.weight, ParamRole::kTrainable);
    fn(join_name(prefix, "bias"), self.bias, ParamRole::kTrainable);
  }
};

/// Per-feature batch normalization over rows, momentum 0.9 on the running
/// averages (running = 0.9·running + 0.1·batch).
class BatchNorm {
 public:
  static constexpr double kDefaultMomentum = 0.9;

  BatchNorm() = default;
  explicit BatchNorm(std::size_t features);

  NodeId forward(Context& ctx, NodeId x) const;

  /// Folds the batch statistics recorded at `node` into the running averages.
  void absorb(const Tape& tape, NodeId node, double momentum = kDefaultMomentum);
  /// Applies every record in `ctx` that belongs to this layer.
  void absorb_all(const Context& ctx, double momentum = kDefaultMomentum);

  std::size_t features() const { return gamma.cols(); }
  BatchNormStats running() const;

  Tensor gamma;
  Tensor beta;
  Tensor running_mean;
  Tensor running_var;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    fn(join_name(prefix, "gamma"), self.gamma, ParamRole::kTrainable);
    fn(join_name(prefix, "beta"), self.beta, ParamRole::kTrainable);
    fn(join_name(prefix, "running_mean"), self.running_mean, ParamRole::kState);
    fn(join_name(prefix, "running_var"), self.running_var, ParamRole::kState);
  }
};

void glorot_fill(Tensor& t, Rng& rng);

/// Adam with bias correction. State is keyed by position in the parameter
/// list, so the same list order must be passed on every step.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const ParamList& params, const std::vector<Tensor>& grads);
  double learning_rate() const { return lr_; }
  long steps() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

double global_norm(const std::vector<Tensor>& grads);
/// Rescales in place so the global L2 norm is at most `max_norm`; returns the
/// norm before clipping.
double clip_global_norm(std::vector<Tensor>& grads, double max_norm);

/// Flat 1×P view of a parameter list, for finite-difference checks.
Tensor flatten(const ParamList& params);
void unflatten(const Tensor& flat, const ParamList& params);

}  // namespace genn::diff
