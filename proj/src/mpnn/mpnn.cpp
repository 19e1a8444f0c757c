// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/mpnn/mpnn.hpp"

#include <string>

#include "genn/common/error.hpp"

namespace genn::mpnn {

std::shared_ptr<const EdgeIndex> make_edge_index(std::size_t num_nodes,
                                                 std::span<const NodePair> pairs,
                                                 Aggregation aggregation) {
  auto index = std::make_shared<EdgeIndex>();
  index->num_nodes = num_nodes;
  index->pairs.assign(pairs.begin(), pairs.end());
  index->node_weight.assign(num_nodes, 1.0);
  std::vector<std::size_t> degree(num_nodes, 0);
  for (const NodePair& p : pairs) {
    for (int id : {p.u, p.v}) {
      if (id < 0 || static_cast<std::size_t>(id) >= num_nodes) {
        fail(ErrorCode::kNodeOutOfRange, "edge endpoint " + std::to_string(id) +
                                             " out of range [0," + std::to_string(num_nodes) + ")");
      }
      ++degree[static_cast<std::size_t>(id)];
    }
  }
  if (aggregation == Aggregation::kMean) {
    for (std::size_t i = 0; i < num_nodes; ++i) {
      if (degree[i] > 0) index->node_weight[i] = 1.0 / static_cast<double>(degree[i]);
    }
  }
  return index;
}

EdgeNet EdgeNet::glorot(std::size_t num_types, std::size_t dim, Rng& rng) {
  return {Linear::glorot(num_types, dim, rng), Linear::glorot(dim, dim * dim, rng)};
}

NodeId EdgeNet::forward(Context& ctx, NodeId labels) const {
  const NodeId hidden_out = ctx.tape.relu(hidden.forward(ctx, labels));
  return output.forward(ctx, hidden_out);
}

Encoder Encoder::glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                        std::size_t num_layers, Rng& rng) {
  if (num_layers < 1) fail(ErrorCode::kInvalidArgument, "encoder needs at least one layer");
  Encoder enc;
  enc.input_weight = Tensor(dim, feature_dim);
  diff::glorot_fill(enc.input_weight, rng);
  for (std::size_t t = 0; t < num_layers; ++t) {
    MpnnLayer layer;
    layer.self_weight = Tensor(dim, dim);
    diff::glorot_fill(layer.self_weight, rng);
    layer.edge_net = EdgeNet::glorot(num_types, dim, rng);
    enc.layers.push_back(std::move(layer));
  }
  return enc;
}

std::size_t Encoder::num_types() const {
  return layers.empty() ? 0 : layers.front().edge_net.hidden.in_dim();
}

NodeId message_passing_step(Context& ctx, NodeId states, NodeId labels,
                            const std::shared_ptr<const EdgeIndex>& edges, const MpnnLayer& layer) {
  const NodeId self_term = ctx.tape.matmul_bt(states, ctx.bind(layer.self_weight));
  if (edges->pairs.empty()) return self_term;
  const NodeId transforms = layer.edge_net.forward(ctx, labels);
  return ctx.tape.add(self_term, ctx.tape.edge_message(transforms, states, edges));
}

NodeId Encoder::forward(Context& ctx, NodeId features, NodeId labels,
                        const std::shared_ptr<const EdgeIndex>& edges) const {
  const Tensor& x = ctx.tape.value(features);
  if (x.rows() != edges->num_nodes) {
    fail(ErrorCode::kShapeMismatch, "encoder: " + std::to_string(x.rows()) +
                                        " feature rows for " + std::to_string(edges->num_nodes) +
                                        " nodes");
  }
  const Tensor& y = ctx.tape.value(labels);
  if (y.rows() != edges->pairs.size()) {
    fail(ErrorCode::kShapeMismatch, "encoder: " + std::to_string(y.rows()) + " label rows for " +
                                        std::to_string(edges->pairs.size()) + " edges");
  }
  NodeId h = ctx.tape.matmul_bt(features, ctx.bind(input_weight));
  for (const MpnnLayer& layer : layers) h = message_passing_step(ctx, h, labels, edges, layer);
  return h;
}

NodeId pair_features(Context& ctx, NodeId states, std::span<const NodePair> pairs) {
  const std::size_t n = ctx.tape.value(states).rows();
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;
  lo.reserve(pairs.size());
  hi.reserve(pairs.size());
  for (const NodePair& p : pairs) {
    for (int id : {p.u, p.v}) {
      if (id < 0 || static_cast<std::size_t>(id) >= n) {
        fail(ErrorCode::kNodeOutOfRange, "pair endpoint " + std::to_string(id) +
                                             " out of range [0," + std::to_string(n) + ")");
      }
    }
    if (p.u == p.v) {
      fail(ErrorCode::kInvalidArgument, "pair (" + std::to_string(p.u) + "," +
                                            std::to_string(p.v) + ") is a self-pair");
    }
    const NodePair c = p.canonical();
    lo.push_back(static_cast<std::size_t>(c.u));
    hi.push_back(static_cast<std::size_t>(c.v));
  }
  return ctx.tape.concat_cols(ctx.tape.gather_rows(states, std::move(lo)),
                              ctx.tape.gather_rows(states, std::move(hi)));
}

EdgeHead EdgeHead::glorot(std::size_t dim, std::size_t num_types, Rng& rng) {
  return {Linear::glorot(2 * dim, num_types, rng)};
}

NodeId EdgeHead::logits(Context& ctx, NodeId states, std::span<const NodePair> pairs) const {
  return linear.forward(ctx, pair_features(ctx, states, pairs));
}

MpnnParams MpnnParams::glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                              std::size_t num_layers, Rng& rng) {
  Encoder enc = Encoder::glorot(feature_dim, num_types, dim, num_layers, rng);
  return {std::move(enc), EdgeHead::glorot(dim, num_types, rng)};
}

Tensor message_passing_step(const Tensor& states, std::span<const NodePair> edges,
                            const Tensor& labels, const MpnnLayer& layer,
                            Aggregation aggregation) {
  diff::Tape tape;
  Context ctx(tape);
  const auto index = make_edge_index(states.rows(), edges, aggregation);
  const NodeId out =
      message_passing_step(ctx, tape.constant(states), tape.constant(labels), index, layer);
  return tape.value(out);
}

Tensor encode(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
              const Encoder& encoder, Aggregation aggregation) {
  diff::Tape tape;
  Context ctx(tape);
  const auto index = make_edge_index(features.rows(), edges, aggregation);
  return tape.value(encoder.forward(ctx, tape.constant(features), tape.constant(labels), index));
}

Tensor predict_edges(const Tensor& states, std::span<const NodePair> pairs, const EdgeHead& head) {
  diff::Tape tape;
  Context ctx(tape);
  return tape.value(tape.sigmoid(head.logits(ctx, tape.constant(states), pairs)));
}

}  // namespace genn::mpnn
