// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genn/common/rng.hpp"
#include "genn/common/types.hpp"
#include "genn/diff/nn.hpp"
#include "genn/diff/tape.hpp"
#include "genn/trainer/config.hpp"

namespace genn::mpnn {

using diff::Context;
using diff::EdgeIndex;
using diff::Linear;
using diff::NodeId;
using diff::ParamRole;
using diff::Tensor;

/// Edge list for the graph ops. Mean aggregation scales each node's
/// incoming messages by 1/degree; isolated nodes keep weight 1.
std::shared_ptr<const EdgeIndex> make_edge_index(std::size_t num_nodes,
                                                 std::span<const NodePair> pairs,
                                                 Aggregation aggregation = Aggregation::kSum);

/// f: R^L → R^{M×M}, one hidden ReLU layer of width M, output read row-major.
struct EdgeNet {
  Linear hidden;
  Linear output;

  static EdgeNet glorot(std::size_t num_types, std::size_t dim, Rng& rng);
  NodeId forward(Context& ctx, NodeId labels) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Linear::visit(self.hidden, diff::join_name(prefix, "hidden"), fn);
    Linear::visit(self.output, diff::join_name(prefix, "output"), fn);
  }
};

struct MpnnLayer {
  Tensor self_weight;  // Ws, M×M
  EdgeNet edge_net;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    fn(diff::join_name(prefix, "self_weight"), self.self_weight, ParamRole::kTrainable);
    EdgeNet::visit(self.edge_net, diff::join_name(prefix, "edge_net"), fn);
  }
};

/// h⁰ = W0·x, then hᵗ⁺¹_i = Ws·hᵗ_i + Σ_{j∈N(i)} f(e_ij)·hᵗ_j per layer.
struct Encoder {
  Tensor input_weight;  // W0, M×D
  std::vector<MpnnLayer> layers;

  static Encoder glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                        std::size_t num_layers, Rng& rng);

  std::size_t feature_dim() const { return input_weight.cols(); }
  std::size_t hidden_dim() const { return input_weight.rows(); }
  std::size_t num_types() const;

  /// `labels` holds one row per edge of `edges`.
  NodeId forward(Context& ctx, NodeId features, NodeId labels,
                 const std::shared_ptr<const EdgeIndex>& edges) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    fn(diff::join_name(prefix, "input_weight"), self.input_weight, ParamRole::kTrainable);
    for (std::size_t i = 0; i < self.layers.size(); ++i) {
      MpnnLayer::visit(self.layers[i], diff::join_name(prefix, "layer" + std::to_string(i)), fn);
    }
  }
};

NodeId message_passing_step(Context& ctx, NodeId states, NodeId labels,
                            const std::shared_ptr<const EdgeIndex>& edges, const MpnnLayer& layer);

/// |pairs|×2M rows [h_min ‖ h_max] for each pair ordered by node id.
NodeId pair_features(Context& ctx, NodeId states, std::span<const NodePair> pairs);

/// Linear decoder over [h_i ‖ h_j]; sigmoid of its logits gives probabilities.
struct EdgeHead {
  Linear linear;

  static EdgeHead glorot(std::size_t dim, std::size_t num_types, Rng& rng);
  NodeId logits(Context& ctx, NodeId states, std::span<const NodePair> pairs) const;

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Linear::visit(self.linear, diff::join_name(prefix, "linear"), fn);
  }
};

struct MpnnParams {
  Encoder encoder;
  EdgeHead head;

  static MpnnParams glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                           std::size_t num_layers, Rng& rng);

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Encoder::visit(self.encoder, diff::join_name(prefix, "encoder"), fn);
    EdgeHead::visit(self.head, diff::join_name(prefix, "head"), fn);
  }
};

// Tape-free evaluation over frozen parameters.

Tensor message_passing_step(const Tensor& states, std::span<const NodePair> edges,
                            const Tensor& labels, const MpnnLayer& layer,
                            Aggregation aggregation = Aggregation::kSum);
Tensor encode(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
              const Encoder& encoder, Aggregation aggregation = Aggregation::kSum);
Tensor predict_edges(const Tensor& states, std::span<const NodePair> pairs, const EdgeHead& head);

}  // namespace genn::mpnn
