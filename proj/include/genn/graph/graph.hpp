// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "genn/common/types.hpp"
#include "genn/diff/tensor.hpp"

namespace genn::graph {

using diff::Tensor;

/// Multi-hot edge label; one bit per interaction type.
using LabelBits = std::vector<bool>;

struct Edge {
  int src = 0;
  int dst = 0;
  LabelBits labels;

  NodePair pair() const { return {src, dst}; }
  std::vector<int> types() const;
};

struct Neighbor {
  int node;
  std::size_t edge;
};

/// Undirected attributed multi-label graph. Immutable after construction;
/// each unordered pair appears at most once and adjacency lists every edge
/// under both endpoints.
class Graph {
 public:
  Graph() = default;
  /// Validates ids, self-loops, duplicates and label widths.
  Graph(Tensor features, std::size_t num_types, std::vector<Edge> edges);

  std::size_t num_nodes() const { return features_.rows(); }
  std::size_t feature_dim() const { return features_.cols(); }
  std::size_t num_types() const { return num_types_; }
  std::size_t num_edges() const { return edges_.size(); }

  const Tensor& features() const { return features_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  std::span<const Neighbor> neighbors(int node) const {
    return adjacency_.at(static_cast<std::size_t>(node));
  }

  std::optional<std::size_t> find_edge(int a, int b) const;
  bool has_edge(int a, int b) const { return find_edge(a, b).has_value(); }

  /// |indices|×L 0/1 matrix of the selected edges' labels.
  Tensor label_matrix(std::span<const std::size_t> indices) const;
  std::vector<NodePair> pairs(std::span<const std::size_t> indices) const;

 private:
  Tensor features_;
  std::size_t num_types_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

}  // namespace genn::graph
