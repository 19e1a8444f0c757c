// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/graph/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "genn/common/error.hpp"
#include "genn/common/rng.hpp"

namespace genn::graph {
namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.num_types < 2) fail(ErrorCode::kInvalidArgument, "synthetic graph needs L >= 2");
  if (spec.num_nodes < 2) fail(ErrorCode::kInvalidArgument, "synthetic graph needs >= 2 nodes");
  if (spec.num_communities < 1) fail(ErrorCode::kInvalidArgument, "need >= 1 community");
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, std::string(what) + " must be in [0,1]");
    }
  };
  prob(spec.edge_prob, "edge_prob");
  prob(spec.base_rate, "base_rate");
  prob(spec.favored_boost, "favored_boost");
  for (const auto& c : spec.corr_pairs) {
    prob(c.prob, "co-occurrence probability");
    const auto l = static_cast<int>(spec.num_types);
    if (c.cause < 0 || c.cause >= l || c.effect < 0 || c.effect >= l || c.cause == c.effect) {
      fail(ErrorCode::kInvalidArgument, "correlated pair (" + std::to_string(c.cause) + "," +
                                            std::to_string(c.effect) + ") invalid for L=" +
                                            std::to_string(l));
    }
  }
}

std::size_t community_pair_index(int a, int b, std::size_t communities) {
  const auto lo = static_cast<std::size_t>(std::min(a, b));
  const auto hi = static_cast<std::size_t>(std::max(a, b));
  return lo * communities + hi;
}

}  // namespace

std::vector<int> synthetic_communities(const SyntheticSpec& spec) {
  Rng rng = make_rng(spec.seed, "synthetic.communities");
  std::uniform_int_distribution<int> pick(0, static_cast<int>(spec.num_communities) - 1);
  std::vector<int> out(spec.num_nodes);
  for (int& c : out) c = pick(rng);
  return out;
}

Graph generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t n = spec.num_nodes;
  const std::size_t l = spec.num_types;
  const std::size_t k = spec.num_communities;
  const std::size_t d = SyntheticSpec::kFeatureDim;
  const double base = spec.base_rate > 0.0 ? spec.base_rate : 1.0 / static_cast<double>(l);

  const std::vector<int> community = synthetic_communities(spec);

  Rng feature_rng = make_rng(spec.seed, "synthetic.features");
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor offsets(k, d);
  for (double& v : offsets.data()) v = spec.community_offset * normal(feature_rng);
  Tensor features(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(community[i]);
    for (std::size_t j = 0; j < d; ++j) features(i, j) = normal(feature_rng) + offsets(c, j);
  }

  // Each unordered community pair favours one type.
  Rng label_rng = make_rng(spec.seed, "synthetic.labels");
  std::uniform_int_distribution<int> pick_type(0, static_cast<int>(l) - 1);
  std::vector<int> favored(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) favored[a * k + b] = pick_type(label_rng);
  }

  Rng edge_rng = make_rng(spec.seed, "synthetic.edges");
  std::bernoulli_distribution has_edge(spec.edge_prob);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!has_edge(edge_rng)) continue;
      const int fav = favored[community_pair_index(community[u], community[v], k)];
      LabelBits bits(l, false);
      if (spec.label_mode == LabelMode::kSingle) {
        // P(favored) = boost + (1-boost)/L, remaining mass uniform.
        int t = pick_type(label_rng);
        if (unit(label_rng) < spec.favored_boost) t = fav;
        bits[static_cast<std::size_t>(t)] = true;
      } else {
        bool any = false;
        while (!any) {
          for (std::size_t t = 0; t < l; ++t) {
            const double rate =
                std::min(1.0, base + (static_cast<int>(t) == fav ? spec.favored_boost : 0.0));
            bits[t] = unit(label_rng) < rate;
            any = any || bits[t];
          }
        }
      }
      for (const auto& c : spec.corr_pairs) {
        const bool draw = unit(label_rng) < c.prob;
        if (bits[static_cast<std::size_t>(c.cause)] && draw) {
          bits[static_cast<std::size_t>(c.effect)] = true;
        }
      }
      edges.push_back({static_cast<int>(u), static_cast<int>(v), std::move(bits)});
    }
  }
  if (edges.size() < 10) {
    fail(ErrorCode::kDegenerateGraph,
         "synthetic graph has only " + std::to_string(edges.size()) + " edges (need >= 10)");
  }
  return Graph(std::move(features), l, std::move(edges));
}

Tensor gaussian_random_projection(const Tensor& input, std::size_t target_dim,
                                  std::uint64_t seed) {
  if (target_dim < 1) fail(ErrorCode::kInvalidArgument, "projection target_dim must be >= 1");
  Rng rng = make_rng(seed, "random_projection");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(target_dim)));
  Tensor g(input.cols(), target_dim);
  for (double& v : g.data()) v = normal(rng);

  Tensor out(input.rows(), target_dim);
  for (std::size_t r = 0; r < input.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t j = 0; j < input.cols(); ++j) {
      const double x = input(r, j);
      if (x == 0.0) continue;  // one-hot rows touch a single row of G
      const auto src = g.row(j);
      for (std::size_t c = 0; c < target_dim; ++c) dst[c] += x * src[c];
    }
  }
  return out;
}

Tensor random_projection(std::size_t num_nodes, std::size_t target_dim, std::uint64_t seed) {
  return gaussian_random_projection(Tensor::identity(num_nodes), target_dim, seed);
}

}  // namespace genn::graph
