// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "genn/energy/energy.hpp"
#include "genn/graph/task.hpp"
#include "genn/mpnn/gnn.hpp"
#include "genn/trainer/config.hpp"

namespace genn::trainer {

using diff::BatchNorm;
using diff::Context;
using diff::Linear;
using diff::NodeId;
using diff::Tensor;
using energy::EnergyModel;

/// Decoder of an inference network: Linear, batch norm, ReLU, Linear; the
/// sigmoid of its output gives per-type probabilities.
struct InferenceHead {
  Linear hidden;
  BatchNorm norm;
  Linear output;

  static InferenceHead glorot(std::size_t dim, std::size_t hidden_dim, std::size_t num_types,
                              Rng& rng);
  NodeId logits(Context& ctx, NodeId states, std::span<const NodePair> pairs) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Linear::visit(self.hidden, diff::join_name(prefix, "hidden"), fn);
    BatchNorm::visit(self.norm, diff::join_name(prefix, "norm"), fn);
    Linear::visit(self.output, diff::join_name(prefix, "output"), fn);
  }
};

/// G_Φ (head_train) and G_Ψ (head_test) over one shared encoder.
struct InferencePair {
  mpnn::Encoder base;
  InferenceHead head_train;
  InferenceHead head_test;

  static InferencePair glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                              std::size_t num_layers, std::size_t hidden_dim, Rng& rng);

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    mpnn::Encoder::visit(self.base, diff::join_name(prefix, "base"), fn);
    InferenceHead::visit(self.head_train, diff::join_name(prefix, "head_train"), fn);
    InferenceHead::visit(self.head_test, diff::join_name(prefix, "head_test"), fn);
  }
};

/// Everything the minimax objectives read from a task. Query pairs are the
/// validation and test pairs (edges and sampled non-edges): their indices
/// are known, their labels are not.
struct MinimaxInputs {
  Tensor features;
  std::vector<NodePair> train_pairs;
  Tensor train_labels;
  std::vector<NodePair> query_pairs;
  std::shared_ptr<const diff::EdgeIndex> train_index;  // observed edges
  std::shared_ptr<const diff::EdgeIndex> joint_index;  // observed then query edges

  static MinimaxInputs from_task(const graph::Task& task, Aggregation aggregation);
};

/// Σ|pred − truth|.
double structured_error(const Tensor& predicted, const Tensor& truth);
NodeId structured_error(Context& ctx, NodeId predicted, NodeId truth);

/// Probabilities of `head` on `pairs`, encoding the observed edges only.
NodeId head_probabilities(Context& ctx, const InferencePair& pair, const InferenceHead& head,
                          const MinimaxInputs& in, std::span<const NodePair> pairs);

/// [Δ(pred, Y_L) − E_Θ(pred) + E_Θ(Y_L)]₊ on the observed edges.
NodeId hinge(Context& ctx, const EnergyModel& theta, const MinimaxInputs& in,
             NodeId predicted);

/// The hinge with G_Φ evaluated on the observed edges (batch statistics).
double hinge_loss(const EnergyModel& theta, const InferencePair& pair, const MinimaxInputs& in);

enum class GennMode { kFull, kNoJoint };

struct StepStats {
  double hinge = 0.0;
  double energy_truth = 0.0;
  double energy_pred = 0.0;
  double energy_query = 0.0;
  double bce_phi = 0.0;
  double bce_psi = 0.0;
  double loss = 0.0;
};

/// Objective minimized over the pair's parameters:
///   −hinge + λ1·E_Θ(Y_L ∪ Ψ(query)) + λ2·BCE(Φ) + λ3·BCE(Ψ)
/// with the BCE terms summed over `batch`. kNoJoint drops both Ψ terms.
NodeId phi_psi_objective(Context& ctx, const EnergyModel& theta, const InferencePair& pair,
                         const MinimaxInputs& in, const graph::LabeledPairs& batch,
                         const TrainConfig& config, GennMode mode, StepStats* stats = nullptr);

/// Hinge as a function of Θ with fixed G_Φ outputs `phi_predictions`.
NodeId theta_objective(Context& ctx, const EnergyModel& theta, const MinimaxInputs& in,
                       const Tensor& phi_predictions);

/// G_Φ outputs on the observed edges as plain values (batch statistics).
Tensor phi_predictions(const InferencePair& pair, const MinimaxInputs& in);

/// Alternating optimizer state for one (Θ, Φ, Ψ) triple. The referenced
/// models must outlive the trainer and keep their addresses.
class MinimaxTrainer {
 public:
  MinimaxTrainer(EnergyModel& theta, InferencePair& pair, const MinimaxInputs& inputs,
                 const TrainConfig& config, GennMode mode);

  /// One descent step of phi_psi_objective over the pair; Θ untouched.
  StepStats step_phi_psi(const graph::LabeledPairs& batch);
  /// One descent step of the hinge over Θ; the pair untouched.
  double step_theta();

 private:
  EnergyModel* theta_;
  InferencePair* pair_;
  const MinimaxInputs* inputs_;
  TrainConfig config_;
  GennMode mode_;
  diff::ParamList pair_params_;
  diff::ParamList theta_params_;
  diff::Adam pair_adam_;
  diff::Adam theta_adam_;
};

/// Probabilities of head_test (inference statistics) on `query`, encoding
/// the observed edges only. Throws kQueryOverlapsTrain for observed pairs.
Tensor infer(const InferencePair& pair, const graph::Task& task, std::span<const NodePair> query,
             Aggregation aggregation = Aggregation::kSum);

/// Same as `infer` for either head and prebuilt inputs, without the overlap check.
Tensor predict_head(const InferencePair& pair, const InferenceHead& head, const MinimaxInputs& in,
                    std::span<const NodePair> query);

enum class EnergyKind { kGlobal, kLocal };

struct EpochLog {
  int epoch = 0;
  double hinge = 0.0;
  double energy_truth = 0.0;
  double energy_pred = 0.0;
  double bce_phi = 0.0;
  double bce_psi = 0.0;
  double val_prauc = 0.0;
  double hinge_after_theta = 0.0;
};

struct GennResult {
  EnergyModel theta;
  InferencePair pair;
  std::vector<EpochLog> log;  // entry 0 describes the model before minimax training
  int best_epoch = 0;
  double best_val_prauc = 0.0;
  mpnn::GnnTrainResult pretrain;
};

/// Pretrains the GNN, copies its encoder into the pair and into Θ, then
/// alternates step_phi_psi and step_theta with early stopping on the
/// validation PR-AUC of the test head (of the train head for kNoJoint,
/// whose test head is then fine-tuned against the energy).
GennResult train_genn(const graph::Task& task, const TrainConfig& config,
                      GennMode mode = GennMode::kFull, EnergyKind energy = EnergyKind::kGlobal);

/// CSV with header epoch,hinge,energy_truth,energy_pred,bce_phi,bce_psi,val_prauc.
void write_epoch_log(std::ostream& out, std::span<const EpochLog> log);

}  // namespace genn::trainer
