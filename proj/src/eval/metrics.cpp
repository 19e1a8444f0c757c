// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genn/common/error.hpp"

namespace genn::eval {
namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + ": " + std::to_string(a) +
                                        " scores vs " + std::to_string(b) + " labels");
  }
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> truth) {
  check_lengths(scores.size(), truth.size(), "roc_auc");
  const auto n = scores.size();
  std::size_t pos = 0;
  for (int t : truth) pos += t != 0 ? 1 : 0;
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    fail(ErrorCode::kDegenerateLabels, "roc_auc needs at least one positive and one negative");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mann-Whitney U with midranks for ties.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (truth[order[k]] != 0) rank_sum += midrank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

double pr_auc(std::span<const double> scores, std::span<const int> truth) {
  check_lengths(scores.size(), truth.size(), "pr_auc");
  const auto order = descending_order(scores);
  std::size_t hits = 0;
  double total = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (truth[order[rank]] != 0) {
      ++hits;
      total += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0) fail(ErrorCode::kNoPositives, "pr_auc needs at least one positive");
  return total / static_cast<double>(hits);
}

double precision_at_k(const Tensor& scores, const Tensor& truth, std::size_t k) {
  if (!scores.same_shape(truth)) {
    fail(ErrorCode::kShapeMismatch,
         "precision_at_k: scores " + scores.shape_string() + " vs truth " + truth.shape_string());
  }
  if (k < 1 || k > scores.cols()) {
    fail(ErrorCode::kInvalidArgument, "precision_at_k: k=" + std::to_string(k) +
                                          " must be in [1, " + std::to_string(scores.cols()) + "]");
  }
  if (scores.rows() == 0) fail(ErrorCode::kEmptyEvaluation, "precision_at_k on zero rows");
  std::size_t hits = 0;
  std::vector<std::size_t> types(scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    std::iota(types.begin(), types.end(), std::size_t{0});
    const auto row = scores.row(r);
    std::stable_sort(types.begin(), types.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    for (std::size_t j = 0; j < k; ++j) hits += truth(r, types[j]) != 0.0 ? 1 : 0;
  }
  // k is the same for every row, so one division gives the row mean
  return static_cast<double>(hits) / static_cast<double>(k * scores.rows());
}

MetricsReport evaluate(const Tensor& scores, const Tensor& truth) {
  if (!scores.same_shape(truth)) {
    fail(ErrorCode::kShapeMismatch,
         "evaluate: scores " + scores.shape_string() + " vs truth " + truth.shape_string());
  }
  const std::size_t rows = scores.rows();
  const std::size_t labels = scores.cols();
  MetricsReport report;
  report.num_edges = rows;
  report.roc_auc.resize(labels);
  report.pr_auc.resize(labels);

  std::vector<double> col(rows);
  std::vector<int> bits(rows);
  double roc_total = 0.0;
  double pr_total = 0.0;
  std::size_t used = 0;
  for (std::size_t l = 0; l < labels; ++l) {
    std::size_t pos = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      col[r] = scores(r, l);
      bits[r] = truth(r, l) != 0.0 ? 1 : 0;
      pos += static_cast<std::size_t>(bits[r]);
    }
    if (pos == 0 || pos == rows) {
      ++report.labels_skipped;
      continue;
    }
    report.roc_auc[l] = roc_auc(col, bits);
    report.pr_auc[l] = pr_auc(col, bits);
    roc_total += *report.roc_auc[l];
    pr_total += *report.pr_auc[l];
    ++used;
  }
  if (used > 0) {
    report.macro_roc_auc = roc_total / static_cast<double>(used);
    report.macro_pr_auc = pr_total / static_cast<double>(used);
  }

  std::vector<std::size_t> positive_rows;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto t = truth.row(r);
    if (std::any_of(t.begin(), t.end(), [](double v) { return v != 0.0; })) {
      positive_rows.push_back(r);
    }
  }
  report.num_positive = positive_rows.size();
  if (!positive_rows.empty()) {
    Tensor s(positive_rows.size(), labels);
    Tensor t(positive_rows.size(), labels);
    for (std::size_t i = 0; i < positive_rows.size(); ++i) {
      std::copy(scores.row(positive_rows[i]).begin(), scores.row(positive_rows[i]).end(),
                s.row(i).begin());
      std::copy(truth.row(positive_rows[i]).begin(), truth.row(positive_rows[i]).end(),
                t.row(i).begin());
    }
    report.p_at_1 = precision_at_k(s, t, 1);
    if (labels >= 5) report.p_at_5 = precision_at_k(s, t, 5);
  }
  return report;
}

double macro_pr_auc_or_zero(const Tensor& scores, const Tensor& truth) {
  return evaluate(scores, truth).macro_pr_auc.value_or(0.0);
}

TypeDistribution type_distribution(const Tensor& predictions, std::span<const NodePair> pairs,
                                   std::size_t num_nodes) {
  if (predictions.rows() != pairs.size()) {
    fail(ErrorCode::kShapeMismatch, "type_distribution: " + std::to_string(predictions.rows()) +
                                        " prediction rows vs " + std::to_string(pairs.size()) +
                                        " pairs");
  }
  TypeDistribution dist;
  dist.counts.assign(predictions.cols(), std::vector<long>(num_nodes, 0));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    for (std::size_t t = 0; t < predictions.cols(); ++t) {
      if (predictions(r, t) == 0.0) continue;
      ++dist.counts[t].at(static_cast<std::size_t>(pairs[r].u));
      ++dist.counts[t].at(static_cast<std::size_t>(pairs[r].v));
    }
  }
  return dist;
}

Tensor binarize(const Tensor& scores, double threshold) {
  Tensor out(scores.rows(), scores.cols());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1.0 : 0.0;
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorCode::kShapeMismatch, "pearson: lengths " + std::to_string(x.size()) + " and " +
                                        std::to_string(y.size()));
  }
  if (x.size() < 2) fail(ErrorCode::kInvalidArgument, "pearson needs at least 2 samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::kConstantVector, "pearson on a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(std::span<const long> x, std::span<const long> y) {
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  return pearson(a, b);
}

}  // namespace genn::eval
