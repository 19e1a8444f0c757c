// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "genn/graph/graph.hpp"

namespace genn::graph {

/// If `cause` is present on an edge, `effect` is added with probability `prob`.
struct CorrelatedPair {
  int cause = 0;
  int effect = 1;
  double prob = 0.0;
};

enum class LabelMode {
  kIndependent,  // each type drawn independently at a community-pair rate
  kSingle,       // exactly one type per edge (before planted pairs)
};

struct SyntheticSpec {
  static constexpr std::size_t kFeatureDim = 16;

  std::size_t num_nodes = 100;
  std::size_t num_types = 8;
  double edge_prob = 0.1;
  std::vector<CorrelatedPair> corr_pairs;
  std::uint64_t seed = 0;

  LabelMode label_mode = LabelMode::kIndependent;
  std::size_t num_communities = 4;
  double community_offset = 1.5;  // std of each community's feature offset
  double base_rate = 0.0;         // per-type rate; 0 selects 1/L
  double favored_boost = 0.5;     // extra rate of a community pair's favored type
};

/// Stochastic-block-style attributed graph with community-dependent edge
/// types and planted type co-occurrences. Node features are 16 standard
/// normals plus the node's community offset.
Graph generate_synthetic(const SyntheticSpec& spec);

/// Community of every node in a graph produced by `generate_synthetic(spec)`.
std::vector<int> synthetic_communities(const SyntheticSpec& spec);

/// input·G with G ∈ R^{D×d} drawn i.i.d. N(0, 1/d).
Tensor gaussian_random_projection(const Tensor& input, std::size_t target_dim, std::uint64_t seed);

/// Projection of the N×N one-hot encoding of node ids to d dimensions.
Tensor random_projection(std::size_t num_nodes, std::size_t target_dim, std::uint64_t seed);

}  // namespace genn::graph
