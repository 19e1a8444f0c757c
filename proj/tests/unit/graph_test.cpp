// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "genn/common/error.hpp"
#include "genn/graph/io.hpp"
#include "genn/graph/split.hpp"
#include "genn/graph/synthetic.hpp"
#include "genn/graph/task.hpp"
#include "test_util.hpp"

namespace genn::graph {
namespace {

using testing::edge;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

Graph parse(const std::string& nodes, const std::string& edges) {
  std::istringstream n(nodes);
  std::istringstream e(edges);
  return read_graph(n, e);
}

// Plain sample Pearson, written out for the independence check.
double column_r(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double cooccurrence(const Graph& g, int a, int b) {
  std::size_t with_a = 0, with_both = 0;
  for (const Edge& e : g.edges()) {
    if (e.labels[static_cast<std::size_t>(a)]) {
      ++with_a;
      if (e.labels[static_cast<std::size_t>(b)]) ++with_both;
    }
  }
  return with_a == 0 ? 0.0 : static_cast<double>(with_both) / static_cast<double>(with_a);
}

TEST(Graph, AdjacencyMirrorsEveryEdge) {
  const Graph g(Tensor(4, 1), 2, {edge(0, 1, {0}, 2), edge(2, 1, {1}, 2)});
  ASSERT_EQ(g.neighbors(1).size(), 2u);
  EXPECT_EQ(g.neighbors(0).front().node, 1);
  EXPECT_EQ(g.neighbors(2).front().edge, 1u);
  EXPECT_TRUE(g.neighbors(3).empty());
  EXPECT_EQ(g.find_edge(1, 2), std::optional<std::size_t>(1));
  EXPECT_FALSE(g.has_edge(0, 3));
}

TEST(Graph, RejectsSelfLoopsDuplicatesAndBadLabels) {
  EXPECT_EQ(code_of([] { Graph(Tensor(2, 1), 1, {edge(1, 1, {0}, 1)}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { Graph(Tensor(2, 1), 1, {edge(0, 1, {0}, 1), edge(1, 0, {0}, 1)}); }),
            ErrorCode::kDuplicateEdge);
  EXPECT_EQ(code_of([] { Graph(Tensor(2, 1), 1, {edge(0, 2, {0}, 1)}); }),
            ErrorCode::kNodeOutOfRange);
  EXPECT_EQ(code_of([] { Graph(Tensor(2, 1), 2, {edge(0, 1, {0}, 1)}); }),
            ErrorCode::kShapeMismatch);
}

TEST(Io, MinimalGraph) {
  const Graph g = parse("node_id,f0\n0,1.5\n1,-2\n", "src,dst,labels\n0,1,0\n");
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_EQ(g.num_types(), 1u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.features()(1, 0), -2.0);
}

TEST(Io, TypeCountIsOnePlusMaxIndex) {
  const Graph g = parse("node_id,f0\n0,0\n1,0\n2,0\n", "src,dst,labels\n0,1,4;1\n1,2,0\n");
  EXPECT_EQ(g.num_types(), 5u);
  EXPECT_EQ(g.edge(0).types(), (std::vector<int>{1, 4}));
}

TEST(Io, NodeIdEqualToCountIsOutOfRange) {
  EXPECT_EQ(code_of([] { parse("node_id,f0\n0,0\n1,0\n", "src,dst,labels\n0,2,0\n"); }),
            ErrorCode::kNodeOutOfRange);
}

TEST(Io, EdgeListedInBothDirectionsIsDuplicate) {
  EXPECT_EQ(code_of([] { parse("node_id,f0\n0,0\n1,0\n", "src,dst,labels\n0,1,0\n1,0,0\n"); }),
            ErrorCode::kDuplicateEdge);
}

TEST(Io, ParseErrorsCarryLineNumbers) {
  try {
    parse("node_id,f0\n0,0\n1,0\n", "src,dst,labels\n0,1,0\n0,x,1\n");
    FAIL() << "expected parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Io, EmptyLabelListIsRejected) {
  EXPECT_EQ(code_of([] { parse("node_id,f0\n0,0\n1,0\n", "src,dst,labels\n0,1,\n"); }),
            ErrorCode::kParse);
}

TEST(Io, NodeIdsMustBeInOrder) {
  EXPECT_EQ(code_of([] { parse("node_id,f0\n1,0\n0,0\n", "src,dst,labels\n0,1,0\n"); }),
            ErrorCode::kParse);
}

TEST(Io, RoundTripReproducesFilesUpToEdgeOrder) {
  Rng rng = make_rng(1, "test.io");
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(12, 4, 0.3, rng);
    std::ostringstream n1, e1;
    write_graph(g, n1, e1);
    const Graph back = parse(n1.str(), e1.str());
    std::ostringstream n2, e2;
    write_graph(back, n2, e2);
    EXPECT_EQ(n1.str(), n2.str());
    EXPECT_EQ(back.features(), g.features());
    // Compare edge files as sorted line sets.
    const auto lines = [](const std::string& s) {
      std::multiset<std::string> out;
      std::istringstream in(s);
      for (std::string l; std::getline(in, l);) out.insert(l);
      return out;
    };
    EXPECT_EQ(lines(e1.str()), lines(e2.str()));
  }
}

TEST(Io, SplitRoundTrip) {
  Rng rng = make_rng(2, "test.io");
  const Graph g = testing::random_graph(15, 3, 0.4, rng);
  const EdgeSplit s = split_edges(g, {0.6, 0.2, 0.2}, 4);
  std::ostringstream out;
  write_split(s, out);
  std::istringstream in(out.str());
  const EdgeSplit back = read_split(in, g.num_edges());
  EXPECT_EQ(back.train.size(), s.train.size());
  std::vector<std::size_t> a = s.test, b = back.test;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(Split, TenEdgesEightOneOne) {
  std::vector<Edge> edges;
  for (int i = 1; i <= 10; ++i) edges.push_back(edge(0, i, {0}, 1));
  const Graph g(Tensor(11, 1), 1, edges);
  const EdgeSplit s = split_edges(g, {0.8, 0.1, 0.1}, 7);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.val.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
  EXPECT_EQ(split_edges(g, {0.8, 0.1, 0.1}, 7), s);
}

TEST(Split, RatioSumError) {
  std::vector<Edge> edges;
  for (int i = 1; i <= 10; ++i) edges.push_back(edge(0, i, {0}, 1));
  const Graph g(Tensor(11, 1), 1, edges);
  EXPECT_EQ(code_of([&] { split_edges(g, {0.5, 0.5, 0.5}, 1); }), ErrorCode::kRatioSum);
}

TEST(Split, PartitionPropertyOverRandomGraphsAndRatios) {
  Rng rng = make_rng(3, "test.split");
  std::uniform_real_distribution<double> u(0.05, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = testing::random_graph(10 + trial % 15, 2, 0.4, rng);
    if (g.num_edges() < 3) continue;
    const double val = u(rng), test = u(rng);
    const EdgeSplit s = split_edges(g, {1.0 - val - test, val, test}, trial);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.val.begin(), s.val.end());
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(g.num_edges());
    std::iota(expected.begin(), expected.end(), 0u);
    ASSERT_EQ(all, expected);
    const double n = static_cast<double>(g.num_edges());
    EXPECT_LE(std::abs(static_cast<double>(s.val.size()) - val * n), 1.0);
    EXPECT_LE(std::abs(static_cast<double>(s.test.size()) - test * n), 1.0);
  }
}

TEST(Synthetic, CertainCouplingAlwaysAddsEffect) {
  SyntheticSpec spec;
  spec.corr_pairs = {{0, 1, 1.0}};
  spec.seed = 5;
  const Graph g = generate_synthetic(spec);
  std::size_t with_zero = 0;
  for (const Edge& e : g.edges()) {
    if (e.labels[0]) {
      ++with_zero;
      EXPECT_TRUE(e.labels[1]);
    }
  }
  EXPECT_GT(with_zero, 0u);
}

TEST(Synthetic, UncoupledTypesAreNearlyUncorrelated) {
  SyntheticSpec spec;
  spec.num_types = 4;
  spec.num_nodes = 120;
  spec.seed = 8;
  const Graph g = generate_synthetic(spec);
  ASSERT_GE(g.num_edges(), 500u);
  std::vector<std::vector<double>> cols(4);
  for (const Edge& e : g.edges()) {
    for (std::size_t t = 0; t < 4; ++t) cols[t].push_back(e.labels[t] ? 1.0 : 0.0);
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      EXPECT_LE(std::abs(column_r(cols[a], cols[b])), 0.2) << a << "," << b;
    }
  }
}

TEST(Synthetic, SameSeedIsByteIdentical) {
  SyntheticSpec spec;
  spec.corr_pairs = {{0, 1, 0.9}};
  spec.seed = 3;
  std::ostringstream n1, e1, n2, e2;
  write_graph(generate_synthetic(spec), n1, e1);
  write_graph(generate_synthetic(spec), n2, e2);
  EXPECT_EQ(n1.str(), n2.str());
  EXPECT_EQ(e1.str(), e2.str());
}

TEST(Synthetic, TooFewEdgesIsDegenerate) {
  SyntheticSpec spec;
  spec.num_nodes = 6;
  spec.edge_prob = 0.1;
  EXPECT_EQ(code_of([&] { generate_synthetic(spec); }), ErrorCode::kDegenerateGraph);
}

TEST(Synthetic, StrongerCouplingGivesHigherCooccurrence) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec weak;
    weak.num_nodes = 110;
    weak.seed = seed;
    weak.corr_pairs = {{2, 5, 0.3}};
    SyntheticSpec strong = weak;
    strong.corr_pairs = {{2, 5, 0.8}};
    const Graph gw = generate_synthetic(weak);
    const Graph gs = generate_synthetic(strong);
    ASSERT_GE(gw.num_edges(), 500u);
    EXPECT_GT(cooccurrence(gs, 2, 5), cooccurrence(gw, 2, 5)) << "seed " << seed;
  }
}

TEST(Synthetic, PlantedPairOutrunsUnplanted) {
  SyntheticSpec spec;
  spec.seed = 4;
  spec.corr_pairs = {{0, 1, 0.9}};
  const Graph g = generate_synthetic(spec);
  EXPECT_GT(cooccurrence(g, 0, 1), cooccurrence(g, 4, 5) + 0.3);
}

TEST(Synthetic, SingleModeHasOneTypePerEdge) {
  SyntheticSpec spec;
  spec.label_mode = LabelMode::kSingle;
  spec.seed = 9;
  const Graph g = generate_synthetic(spec);
  for (const Edge& e : g.edges()) EXPECT_EQ(e.types().size(), 1u);
}

TEST(Synthetic, FeaturesHaveSixteenColumns) {
  SyntheticSpec spec;
  const Graph g = generate_synthetic(spec);
  EXPECT_EQ(g.feature_dim(), SyntheticSpec::kFeatureDim);
  EXPECT_EQ(synthetic_communities(spec).size(), spec.num_nodes);
}

TEST(Projection, OneHotRowsSelectRowsOfTheGaussianMatrix) {
  const Tensor r = random_projection(3, 2, 17);
  ASSERT_EQ(r.rows(), 3u);
  ASSERT_EQ(r.cols(), 2u);
  // A dense input is the matching combination of those rows.
  const Tensor x = Tensor::from_rows({{2.0, 0.0, -1.0}});
  const Tensor y = gaussian_random_projection(x, 2, 17);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_NEAR(y(0, c), 2.0 * r(0, c) - r(2, c), 1e-12);
  }
  EXPECT_NE(r.row(0)[0], r.row(1)[0]);
}

TEST(Projection, ExpectedSquaredRowNormIsOne) {
  const Tensor r = random_projection(1000, 8, 21);
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (double v : r.row(i)) total += v * v;
  }
  EXPECT_NEAR(total / 1000.0, 1.0, 0.1);
}

TEST(Projection, Deterministic) {
  EXPECT_EQ(random_projection(5, 3, 2), random_projection(5, 3, 2));
  EXPECT_EQ(code_of([] { random_projection(5, 0, 2); }), ErrorCode::kInvalidArgument);
}

TEST(Task, EvalSetsPairPositivesWithEqualNegatives) {
  Rng rng = make_rng(6, "test.task");
  const Graph g = testing::random_graph(30, 3, 0.2, rng);
  const Task task(g, split_edges(g, {0.8, 0.1, 0.1}, 1), 1);
  for (const LabeledPairs* set : {&task.val(), &task.test()}) {
    ASSERT_EQ(set->size(), 2 * set->num_positive);
    for (std::size_t i = 0; i < set->size(); ++i) {
      const bool positive = i < set->num_positive;
      EXPECT_EQ(g.has_edge(set->pairs[i].u, set->pairs[i].v), positive);
      double row_sum = 0.0;
      for (double v : set->labels.row(i)) row_sum += v;
      EXPECT_EQ(row_sum > 0.0, positive);
    }
  }
}

TEST(Task, SampledNegativesAvoidEdgesAndEvalPairs) {
  Rng rng = make_rng(7, "test.task");
  const Graph g = testing::random_graph(30, 3, 0.2, rng);
  const Task task(g, split_edges(g, {0.8, 0.1, 0.1}, 2), 2);
  std::set<std::uint64_t> eval;
  for (const auto* s : {&task.val(), &task.test()}) {
    for (const NodePair& p : s->pairs) eval.insert(p.key());
  }
  Rng neg = make_rng(1, "test.negatives");
  const auto negs = task.sample_negatives(100, neg);
  std::set<std::uint64_t> seen;
  for (const NodePair& p : negs) {
    EXPECT_NE(p.u, p.v);
    EXPECT_FALSE(g.has_edge(p.u, p.v));
    EXPECT_FALSE(eval.contains(p.key()));
    EXPECT_TRUE(seen.insert(p.key()).second);
  }
}

TEST(Task, TooManyNegativesIsDegenerate) {
  const Graph g(Tensor(4, 1), 1,
                {edge(0, 1, {0}, 1), edge(1, 2, {0}, 1), edge(2, 3, {0}, 1), edge(0, 3, {0}, 1)});
  const Task task(g, EdgeSplit{{0, 1}, {2}, {3}}, 0);
  Rng rng = make_rng(0, "test");
  EXPECT_EQ(code_of([&] { task.sample_negatives(5, rng); }), ErrorCode::kDegenerateGraph);
}

}  // namespace
}  // namespace genn::graph
