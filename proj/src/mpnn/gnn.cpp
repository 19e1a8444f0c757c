// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/mpnn/gnn.hpp"

#include <cmath>

#include "genn/common/error.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/trainer/early_stopping.hpp"

namespace genn::mpnn {

ObservedGraph observed_graph(const graph::Task& task, Aggregation aggregation) {
  ObservedGraph out;
  out.features = task.graph().features();
  out.pairs = task.train().pairs;
  out.labels = task.train().labels;
  out.index = make_edge_index(task.graph().num_nodes(), out.pairs, aggregation);
  return out;
}

NodeId gnn_loss(Context& ctx, const MpnnParams& params, const ObservedGraph& observed,
                const graph::LabeledPairs& batch) {
  auto& tape = ctx.tape;
  const NodeId h = params.encoder.forward(ctx, tape.constant(observed.features),
                                          tape.constant(observed.labels), observed.index);
  const NodeId logits = params.head.logits(ctx, h, batch.pairs);
  const NodeId total = tape.bce_with_logits(logits, tape.constant(batch.labels));
  return tape.scale(total, 1.0 / static_cast<double>(batch.labels.size()));
}

Tensor gnn_predict(const MpnnParams& params, const ObservedGraph& observed,
                   std::span<const NodePair> pairs) {
  diff::Tape tape;
  Context ctx(tape);
  const NodeId h = params.encoder.forward(ctx, tape.constant(observed.features),
                                          tape.constant(observed.labels), observed.index);
  return tape.value(tape.sigmoid(params.head.logits(ctx, h, pairs)));
}

GnnTrainResult train_gnn_baseline(const graph::Task& task, const TrainConfig& config) {
  return train_gnn(task, config, config.max_epochs);
}

GnnTrainResult train_gnn(const graph::Task& task, const TrainConfig& config, int max_epochs) {
  config.validate();
  const graph::Graph& g = task.graph();
  Rng init_rng = make_rng(config.seed, "gnn.init");
  MpnnParams params = MpnnParams::glorot(g.feature_dim(), g.num_types(), config.hidden_dim,
                                         config.num_layers, init_rng);
  const ObservedGraph observed = observed_graph(task, config.aggregation);
  const auto evaluate = [&](const MpnnParams& p) {
    return eval::macro_pr_auc_or_zero(gnn_predict(p, observed, task.val().pairs),
                                      task.val().labels);
  };

  GnnTrainResult result{params, {}, {}, 0};
  EarlyStopping stopping(config.patience);
  result.val_pr_auc.push_back(evaluate(params));
  stopping.update(result.val_pr_auc.back(), 0);

  const diff::ParamList list = diff::trainable(diff::parameters_of(params));
  diff::Adam adam(config.lr_pretrain);
  Rng neg_rng = make_rng(config.seed, "gnn.negatives");
  const auto num_negatives = static_cast<std::size_t>(
      std::lround(config.negative_ratio * static_cast<double>(task.train().size())));

  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    const graph::LabeledPairs batch =
        task.with_negatives(task.sample_negatives(num_negatives, neg_rng));
    guard_divergence("gnn training", [&] {
      diff::Tape tape;
      Context ctx(tape, true);
      const NodeId loss = gnn_loss(ctx, params, observed, batch);
      auto grads = ctx.bind.gradients(list, tape.backward(loss));
      diff::clip_global_norm(grads, config.clip_norm);
      adam.step(list, grads);
      result.train_loss.push_back(tape.value(loss).item());
    });
    result.val_pr_auc.push_back(guard_divergence("gnn training", [&] { return evaluate(params); }));
    if (stopping.update(result.val_pr_auc.back(), epoch)) result.params = params;
    if (stopping.should_stop()) break;
  }
  result.best_epoch = stopping.best_epoch();
  return result;
}

}  // namespace genn::mpnn
