// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "genn/diff/nn.hpp"
#include "genn/graph/task.hpp"
#include "genn/trainer/config.hpp"

namespace genn::baselines {

using diff::Context;
using diff::Linear;
using diff::NodeId;
using diff::Tensor;

/// Rows [x_min ‖ x_max] of endpoint features, smaller node id first.
Tensor pair_samples(const Tensor& features, std::span<const NodePair> pairs);

struct LpConfig {
  double gamma = 0.25;
  int max_iter = 200;
  double tol = 1e-6;               // 0 runs all max_iter iterations
  std::size_t max_samples = 8000;  // dense affinity is samples² doubles

  void validate() const;
};

struct LpResult {
  Tensor scores;               // one row per unlabeled sample
  int iterations = 0;
  bool converged = false;
  std::vector<double> changes;  // max-norm change of the unlabeled rows per iteration
};

/// Label propagation over a dense rbf affinity W_uv = exp(−γ‖z_u − z_v‖²)
/// (self-affinity included), row-normalized, with labeled rows hard-clamped.
/// Unlabeled rows start at 0.5 per type.
LpResult label_propagation(const Tensor& labeled, const Tensor& labels, const Tensor& unlabeled,
                           const LpConfig& config);

/// Link-prediction wrapper: labeled samples are the training edges plus as
/// many zero-label sampled non-edges; unlabeled samples are `queries`.
Tensor lp_predict(const graph::Task& task, std::span<const NodePair> queries,
                  const LpConfig& config, std::uint64_t seed);

/// Two hidden ReLU layers over pair samples, one logit per type.
struct MlpModel {
  Linear hidden1;
  Linear hidden2;
  Linear output;

  static MlpModel glorot(std::size_t input_dim, std::size_t hidden, std::size_t num_types,
                         Rng& rng);
  NodeId logits(Context& ctx, NodeId samples) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Linear::visit(self.hidden1, diff::join_name(prefix, "hidden1"), fn);
    Linear::visit(self.hidden2, diff::join_name(prefix, "hidden2"), fn);
    Linear::visit(self.output, diff::join_name(prefix, "output"), fn);
  }
};

Tensor mlp_predict(const MlpModel& model, const Tensor& features, std::span<const NodePair> pairs);

struct MlpTrainResult {
  MlpModel model;
  std::vector<double> train_loss;
  std::vector<double> val_pr_auc;
  int best_epoch = 0;
};

/// Mean BCE with fresh negatives per epoch and early stopping on validation
/// macro PR-AUC, `max_epochs` at `lr_pretrain`.
MlpTrainResult train_mlp(const graph::Task& task, const TrainConfig& config);

}  // namespace genn::baselines
