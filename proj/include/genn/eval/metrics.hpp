// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "genn/common/types.hpp"
#include "genn/diff/tensor.hpp"
#include "genn/graph/graph.hpp"

namespace genn::eval {

using diff::Tensor;

/// P(score_pos > score_neg) + 0.5·P(tie), computed from midranks.
double roc_auc(std::span<const double> scores, std::span<const int> truth);

/// Average precision: mean over positives of the precision at each positive's
/// rank in score-descending order, ties kept in index order.
double pr_auc(std::span<const double> scores, std::span<const int> truth);

/// Mean over rows of |top-k scored types ∩ true types| / k. Ties between
/// scores pick the lower type index.
double precision_at_k(const Tensor& scores, const Tensor& truth, std::size_t k);

struct MetricsReport {
  std::vector<std::optional<double>> roc_auc;  // nullopt for skipped labels
  std::vector<std::optional<double>> pr_auc;
  std::optional<double> macro_roc_auc;
  std::optional<double> macro_pr_auc;
  std::optional<double> p_at_1;
  std::optional<double> p_at_5;
  std::size_t num_edges = 0;      // rows scored (positives plus sampled negatives)
  std::size_t num_positive = 0;   // rows with at least one true type; P@K uses these
  std::size_t labels_skipped = 0; // labels with no positive or no negative
};

/// Per-label and macro ROC/PR over all rows; P@1 and P@5 over the rows that
/// carry at least one true type.
MetricsReport evaluate(const Tensor& scores, const Tensor& truth);

/// Macro PR-AUC, or 0 when no label has both classes.
double macro_pr_auc_or_zero(const Tensor& scores, const Tensor& truth);

/// Per type ℓ and node v: number of predicted edges incident to v that carry ℓ.
struct TypeDistribution {
  std::vector<std::vector<long>> counts;  // [type][node]
};

/// `predictions` holds one 0/1 row per entry of `pairs`.
TypeDistribution type_distribution(const Tensor& predictions, std::span<const NodePair> pairs,
                                   std::size_t num_nodes);

/// 1.0 where score ≥ threshold, else 0.0.
Tensor binarize(const Tensor& scores, double threshold);

/// Sample Pearson correlation; both inputs must be non-constant.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const long> x, std::span<const long> y);

}  // namespace genn::eval
