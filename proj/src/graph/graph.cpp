// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/graph/graph.hpp"

#include <string>

#include "genn/common/error.hpp"

namespace genn::graph {

std::vector<int> Edge::types() const {
  std::vector<int> out;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t]) out.push_back(static_cast<int>(t));
  }
  return out;
}

Graph::Graph(Tensor features, std::size_t num_types, std::vector<Edge> edges)
    : features_(std::move(features)), num_types_(num_types), edges_(std::move(edges)) {
  const auto n = static_cast<int>(features_.rows());
  adjacency_.resize(features_.rows());
  lookup_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    for (int id : {e.src, e.dst}) {
      if (id < 0 || id >= n) {
        fail(ErrorCode::kNodeOutOfRange, "edge " + std::to_string(i) + " references node " +
                                             std::to_string(id) + " but the graph has " +
                                             std::to_string(n) + " nodes");
      }
    }
    if (e.src == e.dst) {
      fail(ErrorCode::kInvalidArgument, "self-loop on node " + std::to_string(e.src));
    }
    if (e.labels.size() != num_types_) {
      fail(ErrorCode::kShapeMismatch, "edge " + std::to_string(i) + " has " +
                                          std::to_string(e.labels.size()) +
                                          " label bits, expected " + std::to_string(num_types_));
    }
    if (!lookup_.emplace(e.pair().key(), i).second) {
      fail(ErrorCode::kDuplicateEdge, "duplicate edge between " + std::to_string(e.src) +
                                          " and " + std::to_string(e.dst));
    }
    adjacency_[static_cast<std::size_t>(e.src)].push_back({e.dst, i});
    adjacency_[static_cast<std::size_t>(e.dst)].push_back({e.src, i});
  }
}

std::optional<std::size_t> Graph::find_edge(int a, int b) const {
  auto it = lookup_.find(NodePair{a, b}.key());
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Tensor Graph::label_matrix(std::span<const std::size_t> indices) const {
  Tensor out(indices.size(), num_types_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const LabelBits& bits = edges_.at(indices[r]).labels;
    for (std::size_t t = 0; t < num_types_; ++t) out(r, t) = bits[t] ? 1.0 : 0.0;
  }
  return out;
}

std::vector<NodePair> Graph::pairs(std::span<const std::size_t> indices) const {
  std::vector<NodePair> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(edges_.at(i).pair());
  return out;
}

}  // namespace genn::graph
