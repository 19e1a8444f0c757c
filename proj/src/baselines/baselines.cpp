// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/baselines/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "genn/common/error.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/trainer/early_stopping.hpp"

namespace genn::baselines {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> view(const Tensor& t) {
  return {t.data().data(), static_cast<Eigen::Index>(t.rows()),
          static_cast<Eigen::Index>(t.cols())};
}

}  // namespace

Tensor pair_samples(const Tensor& features, std::span<const NodePair> pairs) {
  const std::size_t d = features.cols();
  Tensor out(pairs.size(), 2 * d);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const NodePair p = pairs[r].canonical();
    for (int id : {p.u, p.v}) {
      if (id < 0 || static_cast<std::size_t>(id) >= features.rows()) {
        fail(ErrorCode::kNodeOutOfRange, "pair endpoint " + std::to_string(id) + " out of range");
      }
    }
    const auto lo = features.row(static_cast<std::size_t>(p.u));
    const auto hi = features.row(static_cast<std::size_t>(p.v));
    auto dst = out.row(r);
    std::copy(lo.begin(), lo.end(), dst.begin());
    std::copy(hi.begin(), hi.end(), dst.begin() + static_cast<long>(d));
  }
  return out;
}

void LpConfig::validate() const {
  if (!(gamma > 0.0)) fail(ErrorCode::kConfig, "lp gamma must be > 0");
  if (max_iter < 1) fail(ErrorCode::kConfig, "lp max_iter must be >= 1");
  if (!(tol >= 0.0)) fail(ErrorCode::kConfig, "lp tol must be >= 0");
}

LpResult label_propagation(const Tensor& labeled, const Tensor& labels, const Tensor& unlabeled,
                           const LpConfig& config) {
  config.validate();
  if (labeled.rows() != labels.rows()) {
    fail(ErrorCode::kShapeMismatch, "label_propagation: " + std::to_string(labeled.rows()) +
                                        " labeled samples vs " + std::to_string(labels.rows()) +
                                        " label rows");
  }
  if (labeled.cols() != unlabeled.cols()) {
    fail(ErrorCode::kShapeMismatch, "label_propagation: labeled " + labeled.shape_string() +
                                        " vs unlabeled " + unlabeled.shape_string());
  }
  if (labeled.rows() == 0) fail(ErrorCode::kInvalidArgument, "label_propagation needs labels");
  const auto nl = static_cast<Eigen::Index>(labeled.rows());
  const auto nu = static_cast<Eigen::Index>(unlabeled.rows());
  const auto n = nl + nu;
  if (static_cast<std::size_t>(n) > config.max_samples) {
    fail(ErrorCode::kMemoryBound, "label_propagation over " + std::to_string(n) +
                                      " samples exceeds the cap of " +
                                      std::to_string(config.max_samples));
  }

  RowMatrix z(n, labeled.cols());
  z.topRows(nl) = view(labeled);
  z.bottomRows(nu) = view(unlabeled);
  const Eigen::VectorXd sq = z.rowwise().squaredNorm();
  RowMatrix w = z * z.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dist = std::max(0.0, sq(i) + sq(j) - 2.0 * w(i, j));
      w(i, j) = std::exp(-config.gamma * dist);
    }
    w(i, i) = 1.0;
  }
  const Eigen::VectorXd degree = w.rowwise().sum();
  // Only unlabeled rows are ever updated.
  const RowMatrix p_ul = degree.tail(nu).cwiseInverse().asDiagonal() * w.bottomLeftCorner(nu, nl);
  const RowMatrix p_uu = degree.tail(nu).cwiseInverse().asDiagonal() * w.bottomRightCorner(nu, nu);
  const RowMatrix seeded = p_ul * view(labels);

  RowMatrix f = RowMatrix::Constant(nu, static_cast<Eigen::Index>(labels.cols()), 0.5);
  LpResult result;
  for (int it = 0; it < config.max_iter; ++it) {
    RowMatrix next = seeded + p_uu * f;
    const double change = nu > 0 ? (next - f).cwiseAbs().maxCoeff() : 0.0;
    f.swap(next);
    result.changes.push_back(change);
    result.iterations = it + 1;
    if (change < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = Tensor(unlabeled.rows(), labels.cols());
  Eigen::Map<RowMatrix>(result.scores.data().data(), nu, f.cols()) = f;
  if (!result.scores.all_finite()) fail(ErrorCode::kNonFinite, "label_propagation produced NaN");
  return result;
}

Tensor lp_predict(const graph::Task& task, std::span<const NodePair> queries,
                  const LpConfig& config, std::uint64_t seed) {
  Rng rng = make_rng(seed, "lp.negatives");
  const graph::LabeledPairs labeled = task.with_negatives(task.sample_negatives(task.train().size(), rng));
  const Tensor& x = task.graph().features();
  return label_propagation(pair_samples(x, labeled.pairs), labeled.labels, pair_samples(x, queries),
                           config)
      .scores;
}

MlpModel MlpModel::glorot(std::size_t input_dim, std::size_t hidden, std::size_t num_types,
                          Rng& rng) {
  MlpModel m;
  m.hidden1 = Linear::glorot(input_dim, hidden, rng);
  m.hidden2 = Linear::glorot(hidden, hidden, rng);
  m.output = Linear::glorot(hidden, num_types, rng);
  return m;
}

NodeId MlpModel::logits(Context& ctx, NodeId samples) const {
  auto& tape = ctx.tape;
  const NodeId a = tape.relu(hidden1.forward(ctx, samples));
  const NodeId b = tape.relu(hidden2.forward(ctx, a));
  return output.forward(ctx, b);
}

Tensor mlp_predict(const MlpModel& model, const Tensor& features, std::span<const NodePair> pairs) {
  diff::Tape tape;
  Context ctx(tape);
  return tape.value(tape.sigmoid(model.logits(ctx, tape.constant(pair_samples(features, pairs)))));
}

MlpTrainResult train_mlp(const graph::Task& task, const TrainConfig& config) {
  config.validate();
  const graph::Graph& g = task.graph();
  Rng init_rng = make_rng(config.seed, "mlp.init");
  MlpModel model = MlpModel::glorot(2 * g.feature_dim(), config.mlp_hidden, g.num_types(), init_rng);
  const auto evaluate = [&](const MlpModel& m) {
    return eval::macro_pr_auc_or_zero(mlp_predict(m, g.features(), task.val().pairs),
                                      task.val().labels);
  };

  MlpTrainResult result{model, {}, {}, 0};
  EarlyStopping stopping(config.patience);
  result.val_pr_auc.push_back(evaluate(model));
  stopping.update(result.val_pr_auc.back(), 0);

  const diff::ParamList list = diff::trainable(diff::parameters_of(model));
  diff::Adam adam(config.lr_pretrain);
  Rng neg_rng = make_rng(config.seed, "mlp.negatives");
  const auto num_negatives = static_cast<std::size_t>(
      std::lround(config.negative_ratio * static_cast<double>(task.train().size())));
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const graph::LabeledPairs batch =
        task.with_negatives(task.sample_negatives(num_negatives, neg_rng));
    guard_divergence("mlp training", [&] {
      diff::Tape tape;
      Context ctx(tape, true);
      const NodeId logits = model.logits(ctx, tape.constant(pair_samples(g.features(), batch.pairs)));
      const NodeId loss = tape.scale(tape.bce_with_logits(logits, tape.constant(batch.labels)),
                                     1.0 / static_cast<double>(batch.labels.size()));
      auto grads = ctx.bind.gradients(list, tape.backward(loss));
      diff::clip_global_norm(grads, config.clip_norm);
      adam.step(list, grads);
      result.train_loss.push_back(tape.value(loss).item());
    });
    result.val_pr_auc.push_back(evaluate(model));
    if (stopping.update(result.val_pr_auc.back(), epoch)) result.model = model;
    if (stopping.should_stop()) break;
  }
  result.best_epoch = stopping.best_epoch();
  return result;
}

}  // namespace genn::baselines
