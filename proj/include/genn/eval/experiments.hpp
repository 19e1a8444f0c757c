// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "genn/eval/pipeline.hpp"
#include "genn/graph/split.hpp"

namespace genn::eval {

/// Train on `fraction` of the edges, validate on a fixed 5%, test on the rest.
graph::SplitRatios robustness_ratios(double fraction);

struct SweepRow {
  Method method = Method::kGenn;
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> pr_auc;
  std::optional<double> roc_auc;
  std::optional<double> p1;
  std::optional<double> p5;
};

struct SweepSummary {
  Method method = Method::kGenn;
  double fraction = 0.0;
  double mean_pr_auc = 0.0;
  double std_pr_auc = 0.0;  // sample std; 0 for a single run
  std::size_t runs = 0;
};

/// Threads allowed for sweeps: GENN_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
std::size_t thread_cap();

/// One row per (fraction, seed, method) in that order. Each seed reseeds both
/// the split and training. Runs execute on up to `threads` workers.
std::vector<SweepRow> robustness_sweep(const graph::Graph& graph, std::span<const double> fractions,
                                       std::span<const std::uint64_t> seeds,
                                       std::span<const Method> methods,
                                       const MethodSettings& settings, std::size_t threads = 1);

/// Mean and sample std of PR-AUC per (method, fraction); runs without a
/// PR-AUC are dropped.
std::vector<SweepSummary> summarize(std::span<const SweepRow> rows);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SweepSummary> rows);

struct CorrelationRow {
  int type_a = 0;
  int type_b = 0;
  std::optional<double> r_truth;  // empty when either distribution is constant
  std::optional<double> r_model;
};

/// Pearson r between per-node type distributions over the positive test
/// edges, from the true labels and from `test_scores` thresholded at
/// `threshold`. `test_scores` rows align with task.test().pairs. Empty
/// `type_pairs` selects every a < b.
std::vector<CorrelationRow> type_correlations(const graph::Task& task, const Tensor& test_scores,
                                              double threshold,
                                              std::span<const std::pair<int, int>> type_pairs = {});

void write_correlation_csv(std::ostream& out, std::span<const CorrelationRow> rows);

}  // namespace genn::eval
