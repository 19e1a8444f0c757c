// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "genn/common/rng.hpp"
#include "genn/common/types.hpp"
#include "genn/graph/graph.hpp"
#include "genn/graph/split.hpp"

namespace genn::graph {

/// Node pairs with one label row each. Non-edges carry all-zero rows.
struct LabeledPairs {
  std::vector<NodePair> pairs;
  Tensor labels;
  std::size_t num_positive = 0;

  std::size_t size() const { return pairs.size(); }
};

/// A graph with its split and the fixed evaluation sets derived from it.
/// Validation and test sets hold their positive edges followed by as many
/// sampled non-edges; those non-edges are never drawn as training negatives.
class Task {
 public:
  Task(Graph graph, EdgeSplit split, std::uint64_t seed);

  const Graph& graph() const { return graph_; }
  const EdgeSplit& split() const { return split_; }
  std::uint64_t seed() const { return seed_; }

  const LabeledPairs& train() const { return train_; }  // positives only
  const LabeledPairs& val() const { return val_; }
  const LabeledPairs& test() const { return test_; }

  /// Uniform node pairs that are neither edges nor evaluation non-edges.
  std::vector<NodePair> sample_negatives(std::size_t count, Rng& rng) const;

  /// Train positives followed by `negatives` with zero labels.
  LabeledPairs with_negatives(const std::vector<NodePair>& negatives) const;

  bool is_train_edge(NodePair p) const;

 private:
  Graph graph_;
  EdgeSplit split_;
  std::uint64_t seed_;
  LabeledPairs train_;
  LabeledPairs val_;
  LabeledPairs test_;
  std::unordered_set<std::uint64_t> train_keys_;
  std::unordered_set<std::uint64_t> reserved_;
};

}  // namespace genn::graph
