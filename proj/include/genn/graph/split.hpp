// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "genn/graph/graph.hpp"

namespace genn::graph {

/// Disjoint train/val/test cover of a graph's edge indices.
struct EdgeSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  std::size_t total() const { return train.size() + val.size() + test.size(); }
  friend bool operator==(const EdgeSplit&, const EdgeSplit&) = default;
};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

/// Seeded uniform permutation of edge indices cut at the requested ratios.
/// Val and test sizes are rounded from their ratios; train takes the rest.
EdgeSplit split_edges(const Graph& graph, SplitRatios ratios, std::uint64_t seed);

/// Checks that the split covers 0..num_edges-1 exactly once.
void validate_split(const EdgeSplit& split, std::size_t num_edges);

}  // namespace genn::graph
