// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/graph/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genn/common/error.hpp"
#include "genn/common/rng.hpp"

namespace genn::graph {

EdgeSplit split_edges(const Graph& graph, SplitRatios ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.val + ratios.test;
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::kRatioSum, "split ratios sum to " + std::to_string(total) + ", expected 1");
  }
  for (double r : {ratios.train, ratios.val, ratios.test}) {
    if (!(r > 0.0 && r < 1.0)) {
      fail(ErrorCode::kInvalidArgument, "split ratio " + std::to_string(r) + " not in (0,1)");
    }
  }
  const std::size_t n = graph.num_edges();
  if (n < 3) fail(ErrorCode::kEmptySplit, "split_edges needs at least 3 edges");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, "split");
  std::shuffle(order.begin(), order.end(), rng);

  auto portion = [n](double r) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(r * static_cast<double>(n))));
  };
  std::size_t n_val = portion(ratios.val);
  std::size_t n_test = portion(ratios.test);
  while (n_val + n_test > n - 1) {
    if (n_test >= n_val && n_test > 1) {
      --n_test;
    } else {
      --n_val;
    }
  }
  const std::size_t n_train = n - n_val - n_test;

  EdgeSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  split.val.assign(order.begin() + static_cast<long>(n_train),
                   order.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(order.begin() + static_cast<long>(n_train + n_val), order.end());
  return split;
}

void validate_split(const EdgeSplit& split, std::size_t num_edges) {
  std::vector<char> seen(num_edges, 0);
  for (const auto* part : {&split.train, &split.val, &split.test}) {
    for (std::size_t i : *part) {
      if (i >= num_edges) {
        fail(ErrorCode::kInvalidArgument, "split references edge " + std::to_string(i) +
                                              " but the graph has " + std::to_string(num_edges));
      }
      if (seen[i]) fail(ErrorCode::kInvalidArgument, "edge " + std::to_string(i) + " appears twice in split");
      seen[i] = 1;
    }
  }
  if (split.total() != num_edges) {
    fail(ErrorCode::kInvalidArgument, "split covers " + std::to_string(split.total()) + " of " +
                                          std::to_string(num_edges) + " edges");
  }
  if (split.train.empty() || split.val.empty() || split.test.empty()) {
    fail(ErrorCode::kEmptySplit, "split has an empty train, val or test part");
  }
}

}  // namespace genn::graph
