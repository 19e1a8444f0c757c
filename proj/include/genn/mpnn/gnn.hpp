// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "genn/graph/task.hpp"
#include "genn/mpnn/mpnn.hpp"
#include "genn/trainer/config.hpp"

namespace genn::mpnn {

/// Node features and the observed (training) edges with their labels, which
/// is everything an encoder may look at.
struct ObservedGraph {
  Tensor features;
  std::vector<NodePair> pairs;
  Tensor labels;
  std::shared_ptr<const EdgeIndex> index;
};

ObservedGraph observed_graph(const graph::Task& task, Aggregation aggregation);

/// Mean binary cross-entropy of the edge head over `batch`.
NodeId gnn_loss(Context& ctx, const MpnnParams& params, const ObservedGraph& observed,
                const graph::LabeledPairs& batch);

/// Edge-type probabilities for `pairs` from the observed graph.
Tensor gnn_predict(const MpnnParams& params, const ObservedGraph& observed,
                   std::span<const NodePair> pairs);

struct GnnTrainResult {
  MpnnParams params;            // best validation snapshot
  std::vector<double> train_loss;  // one entry per completed epoch
  std::vector<double> val_pr_auc;  // entry 0 is the untrained model
  int best_epoch = 0;
};

/// BCE training with fresh negatives each epoch and early stopping on
/// validation macro PR-AUC. Uses `max_epochs` at `lr_pretrain`.
GnnTrainResult train_gnn_baseline(const graph::Task& task, const TrainConfig& config);

/// Same loop with an explicit epoch cap; the GENN pretraining stage.
GnnTrainResult train_gnn(const graph::Task& task, const TrainConfig& config, int max_epochs);

}  // namespace genn::mpnn
