// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genn/eval/pipeline.hpp"
#include "genn/graph/split.hpp"
#include "genn/graph/synthetic.hpp"

namespace genn::cli {

struct FileSource {
  std::filesystem::path nodes;
  std::filesystem::path edges;
  std::optional<std::filesystem::path> split;  // otherwise split by ratios
  std::size_t projection_dim = 0;              // > 0 replaces features with a random projection
};

/// JSON schema (every key optional unless noted; unknown keys are rejected):
///   method        string, one of lp mlp gnn glenn genn_minus genn (default genn)
///   seed          integer (default 0)
///   seeds         integer list for sweeps (default [seed])
///   data          exactly one of
///                   {"synthetic": {num_nodes, num_types, edge_prob, seed,
///                                  label_mode: "independent"|"single",
///                                  num_communities, community_offset,
///                                  base_rate, favored_boost,
///                                  corr_pairs: [{cause, effect, prob}]}}
///                   {"files": {nodes, edges, split, projection_dim}}
///   split         {train, val, test} ratios (default 0.8/0.1/0.1)
///   train         TrainConfig fields; aggregation is "sum" or "mean"
///   lp            {gamma, max_iter, tol, max_samples}
///   robustness    {fractions: [..], methods: [..]}
///   correlation   {pairs: [[a, b], ..], threshold}
struct RunConfig {
  eval::Method method = eval::Method::kGenn;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  std::optional<graph::SyntheticSpec> synthetic;
  std::optional<FileSource> files;
  graph::SplitRatios split;
  eval::MethodSettings settings;
  std::vector<double> fractions{0.05, 0.10, 0.30};
  std::vector<eval::Method> sweep_methods{eval::Method::kGnn, eval::Method::kGenn};
  std::vector<std::pair<int, int>> correlation_pairs;
  double correlation_threshold = 0.4;

  /// Throws kConfig naming the offending field.
  void validate() const;
  /// Sets `seed`, the training seed and, when seeds was defaulted, `seeds`.
  void override_seed(std::uint64_t value);
};

/// Parses and validates; relative data paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Fully expanded config with sorted keys; equal configs give equal text.
std::string canonical_json(const RunConfig& config);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// The graph named by the config's data source.
graph::Graph load_data(const RunConfig& config);
/// The split from the split file if given, otherwise from the ratios and seed.
graph::EdgeSplit make_split(const RunConfig& config, const graph::Graph& graph);

}  // namespace genn::cli
