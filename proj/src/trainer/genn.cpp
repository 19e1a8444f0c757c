// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/trainer/genn.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "genn/common/error.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/graph/io.hpp"
#include "genn/trainer/early_stopping.hpp"

namespace genn::trainer {
namespace {

struct HingeParts {
  NodeId value;
  NodeId energy_pred;
  NodeId energy_truth;
};

HingeParts hinge_parts(Context& ctx, const EnergyModel& theta, const MinimaxInputs& in,
                       NodeId predicted) {
  auto& tape = ctx.tape;
  const NodeId x = tape.constant(in.features);
  const NodeId truth = tape.constant(in.train_labels);
  const NodeId delta = structured_error(ctx, predicted, truth);
  const NodeId e_pred = energy::evaluate(ctx, theta, x, predicted, in.train_index);
  const NodeId e_truth = energy::evaluate(ctx, theta, x, truth, in.train_index);
  const NodeId inner = tape.add(tape.sub(delta, e_pred), e_truth);
  return {tape.relu(inner), e_pred, e_truth};
}

NodeId encode_observed(Context& ctx, const mpnn::Encoder& base, const MinimaxInputs& in) {
  return base.forward(ctx, ctx.tape.constant(in.features), ctx.tape.constant(in.train_labels),
                      in.train_index);
}

bool all_zero(const std::vector<Tensor>& grads) { return diff::global_norm(grads) == 0.0; }

double validation_score(const InferencePair& pair, const InferenceHead& head,
                        const MinimaxInputs& in, const graph::Task& task) {
  return eval::macro_pr_auc_or_zero(predict_head(pair, head, in, task.val().pairs),
                                    task.val().labels);
}

std::size_t negative_count(const graph::Task& task, const TrainConfig& config) {
  return static_cast<std::size_t>(
      std::lround(config.negative_ratio * static_cast<double>(task.train().size())));
}

void finetune_test_head(GennResult& result, const graph::Task& task, const MinimaxInputs& in,
                        const TrainConfig& config) {
  InferencePair& pair = result.pair;
  pair.head_test = pair.head_train;
  const diff::ParamList params = diff::trainable(diff::parameters_of(pair.head_test));
  diff::Adam adam(config.lr_main);
  Rng neg_rng = make_rng(config.seed, "genn.finetune_negatives");

  EarlyStopping stopping(config.patience);
  stopping.update(validation_score(pair, pair.head_test, in, task), 0);
  InferenceHead best = pair.head_test;
  for (int epoch = 1; epoch <= config.finetune_epochs; ++epoch) {
    const graph::LabeledPairs batch =
        task.with_negatives(task.sample_negatives(negative_count(task, config), neg_rng));
    guard_divergence("test-head fine-tuning", [&] {
      diff::Tape tape;
      Context ctx(tape, true);
      const NodeId h = encode_observed(ctx, pair.base, in);
      const NodeId psi = tape.sigmoid(pair.head_test.logits(ctx, h, in.train_pairs));
      NodeId loss = energy::evaluate(ctx, result.theta, tape.constant(in.features), psi,
                                     in.train_index);
      if (config.lambda3 > 0.0) {
        const NodeId bce = tape.bce_with_logits(pair.head_test.logits(ctx, h, batch.pairs),
                                                tape.constant(batch.labels));
        loss = tape.add(loss, tape.scale(bce, config.lambda3));
      }
      auto grads = ctx.bind.gradients(params, tape.backward(loss));
      if (all_zero(grads)) return;
      diff::clip_global_norm(grads, config.clip_norm);
      adam.step(params, grads);
      pair.head_test.norm.absorb_all(ctx);
    });
    if (stopping.update(validation_score(pair, pair.head_test, in, task), epoch)) {
      best = pair.head_test;
    }
    if (stopping.should_stop()) break;
  }
  pair.head_test = best;
}

}  // namespace

InferenceHead InferenceHead::glorot(std::size_t dim, std::size_t hidden_dim,
                                    std::size_t num_types, Rng& rng) {
  InferenceHead head;
  head.hidden = Linear::glorot(2 * dim, hidden_dim, rng);
  head.norm = BatchNorm(hidden_dim);
  head.output = Linear::glorot(hidden_dim, num_types, rng);
  return head;
}

NodeId InferenceHead::logits(Context& ctx, NodeId states, std::span<const NodePair> pairs) const {
  const NodeId z = hidden.forward(ctx, mpnn::pair_features(ctx, states, pairs));
  return output.forward(ctx, ctx.tape.relu(norm.forward(ctx, z)));
}

InferencePair InferencePair::glorot(std::size_t feature_dim, std::size_t num_types,
                                    std::size_t dim, std::size_t num_layers,
                                    std::size_t hidden_dim, Rng& rng) {
  InferencePair pair;
  pair.base = mpnn::Encoder::glorot(feature_dim, num_types, dim, num_layers, rng);
  pair.head_train = InferenceHead::glorot(dim, hidden_dim, num_types, rng);
  pair.head_test = InferenceHead::glorot(dim, hidden_dim, num_types, rng);
  return pair;
}

MinimaxInputs MinimaxInputs::from_task(const graph::Task& task, Aggregation aggregation) {
  MinimaxInputs in;
  in.features = task.graph().features();
  in.train_pairs = task.train().pairs;
  in.train_labels = task.train().labels;
  in.query_pairs = task.val().pairs;
  in.query_pairs.insert(in.query_pairs.end(), task.test().pairs.begin(), task.test().pairs.end());
  const std::size_t n = task.graph().num_nodes();
  in.train_index = mpnn::make_edge_index(n, in.train_pairs, aggregation);
  std::vector<NodePair> joint = in.train_pairs;
  joint.insert(joint.end(), in.query_pairs.begin(), in.query_pairs.end());
  in.joint_index = mpnn::make_edge_index(n, joint, aggregation);
  return in;
}

double structured_error(const Tensor& predicted, const Tensor& truth) {
  diff::Tape tape;
  Context ctx(tape);
  return tape.value(structured_error(ctx, tape.constant(predicted), tape.constant(truth))).item();
}

NodeId structured_error(Context& ctx, NodeId predicted, NodeId truth) {
  return ctx.tape.l1_distance(predicted, truth);
}

NodeId head_probabilities(Context& ctx, const InferencePair& pair, const InferenceHead& head,
                          const MinimaxInputs& in, std::span<const NodePair> pairs) {
  const NodeId h = encode_observed(ctx, pair.base, in);
  return ctx.tape.sigmoid(head.logits(ctx, h, pairs));
}

NodeId hinge(Context& ctx, const EnergyModel& theta, const MinimaxInputs& in,
             NodeId predicted) {
  return hinge_parts(ctx, theta, in, predicted).value;
}

double hinge_loss(const EnergyModel& theta, const InferencePair& pair, const MinimaxInputs& in) {
  diff::Tape tape;
  Context ctx(tape, true);
  const NodeId phi = head_probabilities(ctx, pair, pair.head_train, in, in.train_pairs);
  return tape.value(hinge(ctx, theta, in, phi)).item();
}

Tensor phi_predictions(const InferencePair& pair, const MinimaxInputs& in) {
  diff::Tape tape;
  Context ctx(tape, true);
  return tape.value(head_probabilities(ctx, pair, pair.head_train, in, in.train_pairs));
}

NodeId phi_psi_objective(Context& ctx, const EnergyModel& theta, const InferencePair& pair,
                         const MinimaxInputs& in, const graph::LabeledPairs& batch,
                         const TrainConfig& config, GennMode mode, StepStats* stats) {
  auto& tape = ctx.tape;
  StepStats local;
  const NodeId h = encode_observed(ctx, pair.base, in);
  const NodeId phi = tape.sigmoid(pair.head_train.logits(ctx, h, in.train_pairs));
  const HingeParts parts = hinge_parts(ctx, theta, in, phi);
  local.hinge = tape.value(parts.value).item();
  local.energy_pred = tape.value(parts.energy_pred).item();
  local.energy_truth = tape.value(parts.energy_truth).item();
  NodeId loss = tape.scale(parts.value, -1.0);

  if (config.lambda2 > 0.0) {
    const NodeId bce = tape.bce_with_logits(pair.head_train.logits(ctx, h, batch.pairs),
                                            tape.constant(batch.labels));
    local.bce_phi = tape.value(bce).item();
    loss = tape.add(loss, tape.scale(bce, config.lambda2));
  }
  if (mode == GennMode::kFull) {
    if (config.lambda1 > 0.0) {
      const NodeId psi = tape.sigmoid(pair.head_test.logits(ctx, h, in.query_pairs));
      const NodeId labels = tape.concat_rows(tape.constant(in.train_labels), psi);
      const NodeId e = energy::evaluate(ctx, theta, tape.constant(in.features), labels,
                                        in.joint_index);
      local.energy_query = tape.value(e).item();
      loss = tape.add(loss, tape.scale(e, config.lambda1));
    }
    if (config.lambda3 > 0.0) {
      const NodeId bce = tape.bce_with_logits(pair.head_test.logits(ctx, h, batch.pairs),
                                              tape.constant(batch.labels));
      local.bce_psi = tape.value(bce).item();
      loss = tape.add(loss, tape.scale(bce, config.lambda3));
    }
  }
  local.loss = tape.value(loss).item();
  if (stats != nullptr) *stats = local;
  return loss;
}

NodeId theta_objective(Context& ctx, const EnergyModel& theta, const MinimaxInputs& in,
                       const Tensor& phi_predictions) {
  return hinge(ctx, theta, in, ctx.tape.constant(phi_predictions));
}

MinimaxTrainer::MinimaxTrainer(EnergyModel& theta, InferencePair& pair,
                               const MinimaxInputs& inputs, const TrainConfig& config,
                               GennMode mode)
    : theta_(&theta),
      pair_(&pair),
      inputs_(&inputs),
      config_(config),
      mode_(mode),
      pair_params_(diff::trainable(diff::parameters_of(pair))),
      theta_params_(diff::trainable(energy::parameters(theta))),
      pair_adam_(config.lr_main),
      theta_adam_(config.lr_main) {
  config_.validate();
}

StepStats MinimaxTrainer::step_phi_psi(const graph::LabeledPairs& batch) {
  StepStats stats;
  guard_divergence("phi/psi step", [&] {
    diff::Tape tape;
    Context ctx(tape, true);
    const NodeId loss =
        phi_psi_objective(ctx, *theta_, *pair_, *inputs_, batch, config_, mode_, &stats);
    auto grads = ctx.bind.gradients(pair_params_, tape.backward(loss));
    if (!all_zero(grads)) {
      diff::clip_global_norm(grads, config_.clip_norm);
      pair_adam_.step(pair_params_, grads);
    }
    pair_->head_train.norm.absorb_all(ctx);
    pair_->head_test.norm.absorb_all(ctx);
  });
  return stats;
}

double MinimaxTrainer::step_theta() {
  return guard_divergence("theta step", [&] {
    const Tensor phi = phi_predictions(*pair_, *inputs_);
    diff::Tape tape;
    Context ctx(tape, true);
    const NodeId loss = theta_objective(ctx, *theta_, *inputs_, phi);
    auto grads = ctx.bind.gradients(theta_params_, tape.backward(loss));
    if (!all_zero(grads)) {
      diff::clip_global_norm(grads, config_.clip_norm);
      theta_adam_.step(theta_params_, grads);
    }
    return tape.value(loss).item();
  });
}

Tensor predict_head(const InferencePair& pair, const InferenceHead& head, const MinimaxInputs& in,
                    std::span<const NodePair> query) {
  diff::Tape tape;
  Context ctx(tape, false);
  return tape.value(head_probabilities(ctx, pair, head, in, query));
}

Tensor infer(const InferencePair& pair, const graph::Task& task, std::span<const NodePair> query,
             Aggregation aggregation) {
  for (const NodePair& p : query) {
    if (task.is_train_edge(p)) {
      fail(ErrorCode::kQueryOverlapsTrain, "query pair (" + std::to_string(p.u) + "," +
                                               std::to_string(p.v) + ") is a training edge");
    }
  }
  const mpnn::ObservedGraph observed = mpnn::observed_graph(task, aggregation);
  diff::Tape tape;
  Context ctx(tape, false);
  const NodeId h = pair.base.forward(ctx, tape.constant(observed.features),
                                     tape.constant(observed.labels), observed.index);
  return tape.value(tape.sigmoid(pair.head_test.logits(ctx, h, query)));
}

GennResult train_genn(const graph::Task& task, const TrainConfig& config, GennMode mode,
                      EnergyKind energy_kind) {
  config.validate();
  const graph::Graph& g = task.graph();
  const MinimaxInputs in = MinimaxInputs::from_task(task, config.aggregation);

  GennResult result;
  result.pretrain = mpnn::train_gnn(task, config, config.pretrain_epochs);
  const mpnn::Encoder& pretrained = result.pretrain.params.encoder;

  Rng init_rng = make_rng(config.seed, "genn.init");
  result.pair = InferencePair::glorot(g.feature_dim(), g.num_types(), config.hidden_dim,
                                      config.num_layers, config.mlp_hidden, init_rng);
  result.pair.base = pretrained;
  if (energy_kind == EnergyKind::kGlobal) {
    auto theta = energy::EnergyParams::glorot(g.feature_dim(), g.num_types(), config.hidden_dim,
                                              config.num_layers, config.mlp_hidden, init_rng);
    theta.encoder = pretrained;
    result.theta = std::move(theta);
  } else {
    result.theta = energy::LocalEnergyParams::glorot(g.feature_dim(), g.num_types(), init_rng);
  }

  EnergyModel theta = result.theta;
  InferencePair pair = result.pair;
  const auto head_of = [mode](const InferencePair& p) -> const InferenceHead& {
    return mode == GennMode::kFull ? p.head_test : p.head_train;
  };

  EarlyStopping stopping(config.patience);
  EpochLog initial;
  initial.hinge = initial.hinge_after_theta = hinge_loss(theta, pair, in);
  initial.val_prauc = validation_score(pair, head_of(pair), in, task);
  stopping.update(initial.val_prauc, 0);
  result.log.push_back(initial);

  MinimaxTrainer trainer(theta, pair, in, config, mode);
  Rng neg_rng = make_rng(config.seed, "genn.negatives");
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const graph::LabeledPairs batch =
        task.with_negatives(task.sample_negatives(negative_count(task, config), neg_rng));
    const StepStats stats = trainer.step_phi_psi(batch);
    trainer.step_theta();

    EpochLog entry;
    entry.epoch = epoch;
    entry.hinge = stats.hinge;
    entry.energy_truth = stats.energy_truth;
    entry.energy_pred = stats.energy_pred;
    entry.bce_phi = stats.bce_phi;
    entry.bce_psi = stats.bce_psi;
    entry.hinge_after_theta = hinge_loss(theta, pair, in);
    entry.val_prauc = validation_score(pair, head_of(pair), in, task);
    result.log.push_back(entry);

    if (stopping.update(entry.val_prauc, epoch)) {
      result.theta = theta;
      result.pair = pair;
    }
    if (stopping.should_stop()) break;
  }
  result.best_epoch = stopping.best_epoch();
  result.best_val_prauc = stopping.best();

  if (mode == GennMode::kNoJoint) finetune_test_head(result, task, in, config);
  return result;
}

void write_epoch_log(std::ostream& out, std::span<const EpochLog> log) {
  out << "epoch,hinge,energy_truth,energy_pred,bce_phi,bce_psi,val_prauc\n";
  for (const EpochLog& e : log) {
    out << e.epoch << ',' << graph::format_double(e.hinge) << ','
        << graph::format_double(e.energy_truth) << ',' << graph::format_double(e.energy_pred)
        << ',' << graph::format_double(e.bce_phi) << ',' << graph::format_double(e.bce_psi)
        << ',' << graph::format_double(e.val_prauc) << '\n';
  }
}

}  // namespace genn::trainer
