// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "genn/common/types.hpp"
#include "genn/diff/tensor.hpp"

namespace genn::diff {

using NodeId = std::size_t;

enum class OpKind {
  kLeaf,
  kMatMul,        // A·B
  kMatMulBT,      // A·Bᵀ
  kAdd,
  kAddBias,       // R×C plus a 1×C row broadcast
  kSub,
  kMul,           // elementwise
  kScale,
  kRelu,
  kSigmoid,
  kMean,          // all entries -> 1×1
  kSum,           // all entries -> 1×1
  kMeanRows,      // R×C -> 1×C
  kConcatCols,
  kConcatRows,
  kGatherRows,
  kEdgeMessage,   // per-edge M×M transforms applied along undirected edges
  kIncidenceSum,  // per-edge rows summed onto both endpoints
  kBatchNorm,
  kL1Distance,    // Σ|a−b| -> 1×1
  kBceWithLogits, // Σ BCE(σ(z), t) -> 1×1
};

std::string_view to_string(OpKind kind) noexcept;

/// Undirected edge list shared by the graph ops. `node_weight[i]` scales the
/// message total received by node i (1 for sum aggregation, 1/deg for mean).
struct EdgeIndex {
  std::size_t num_nodes = 0;
  std::vector<NodePair> pairs;
  std::vector<double> node_weight;
};

struct BatchNormStats {
  std::vector<double> mean;
  std::vector<double> var;  // biased
};

/// Gradients of one backward pass, one entry per tape node.
class Gradients {
 public:
  explicit Gradients(std::vector<Tensor> grads) : grads_(std::move(grads)) {}
  const Tensor& operator[](NodeId id) const { return grads_.at(id); }
  std::size_t size() const noexcept { return grads_.size(); }

 private:
  std::vector<Tensor> grads_;
};

/// Append-only record of differentiable operations. Nodes are stored in
/// creation order, which is a topological order by construction.
class Tape {
 public:
  static constexpr double kBatchNormEps = 1e-5;

  NodeId constant(Tensor value);
  NodeId variable(Tensor value);

  /// Generic entry point for attribute-free ops (binary and unary kinds).
  NodeId apply(OpKind kind, std::span<const NodeId> inputs);

  NodeId matmul(NodeId a, NodeId b);
  NodeId matmul_bt(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId add_bias(NodeId a, NodeId bias);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId a, double factor);
  NodeId relu(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId mean(NodeId a);
  NodeId sum(NodeId a);
  NodeId mean_rows(NodeId a);
  NodeId concat_cols(NodeId a, NodeId b);
  NodeId concat_rows(NodeId a, NodeId b);
  NodeId gather_rows(NodeId a, std::vector<std::size_t> index);

  /// out[u] += w_u·F_e·h_v and out[v] += w_v·F_e·h_u for every edge e=(u,v),
  /// with F_e the row e of `transforms` read as a row-major M×M matrix.
  NodeId edge_message(NodeId transforms, NodeId states, std::shared_ptr<const EdgeIndex> edges);
  /// out[u] += V_e and out[v] += V_e for every edge e=(u,v).
  NodeId incidence_sum(NodeId values, std::shared_ptr<const EdgeIndex> edges);

  /// Per-column normalization over rows with batch statistics.
  NodeId batch_norm_train(NodeId x, NodeId gamma, NodeId beta);
  /// Per-column normalization with fixed running statistics.
  NodeId batch_norm_infer(NodeId x, NodeId gamma, NodeId beta, const BatchNormStats& running);
  const BatchNormStats& batch_stats(NodeId bn_node) const;

  NodeId l1_distance(NodeId a, NodeId b);
  NodeId bce_with_logits(NodeId logits, NodeId targets);

  const Tensor& value(NodeId id) const { return nodes_.at(id).value; }
  OpKind kind(NodeId id) const { return nodes_.at(id).kind; }
  const std::vector<NodeId>& inputs(NodeId id) const { return nodes_.at(id).inputs; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Gradients backward(NodeId loss) const;

 private:
  struct GatherAux {
    std::vector<std::size_t> index;
  };
  struct GraphAux {
    std::shared_ptr<const EdgeIndex> edges;
  };
  struct BatchNormAux {
    bool training = true;
    BatchNormStats stats;  // batch stats when training, running stats otherwise
    std::vector<double> inv_std;
    Tensor normalized;
  };
  using Aux = std::variant<std::monostate, double, GatherAux, GraphAux, BatchNormAux>;

  struct Node {
    OpKind kind;
    std::vector<NodeId> inputs;
    Tensor value;
    Aux aux;
  };

  NodeId push(OpKind kind, std::vector<NodeId> inputs, Tensor value, Aux aux = {});
  void check_id(NodeId id) const;
  NodeId batch_norm_impl(NodeId x, NodeId gamma, NodeId beta, const BatchNormStats* running);
  void backprop_node(NodeId id, std::vector<Tensor>& grads) const;

  std::vector<Node> nodes_;
};

}  // namespace genn::diff
