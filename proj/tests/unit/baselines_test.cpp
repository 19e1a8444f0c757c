// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "genn/baselines/baselines.hpp"
#include "genn/common/error.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/graph/split.hpp"
#include "genn/graph/synthetic.hpp"
#include "test_util.hpp"

namespace genn::baselines {
namespace {

using testing::random_tensor;

Tensor stack(const Tensor& a, const Tensor& b) {
  Tensor out(a.rows() + b.rows(), a.cols());
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(), out.data().begin() + static_cast<long>(a.size()));
  return out;
}

// Harmonic solution f_u = (I − P_uu)⁻¹ P_ul Y_l by a direct solve.
Eigen::MatrixXd harmonic(const Tensor& labeled, const Tensor& labels, const Tensor& unlabeled,
                         double gamma) {
  const Tensor z = stack(labeled, unlabeled);
  const long n = static_cast<long>(z.rows());
  const long l = static_cast<long>(labeled.rows());
  Eigen::MatrixXd w(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < z.cols(); ++c) {
        const double diff = z(static_cast<std::size_t>(i), c) - z(static_cast<std::size_t>(j), c);
        d2 += diff * diff;
      }
      w(i, j) = std::exp(-gamma * d2);
    }
  }
  const Eigen::MatrixXd p = w.array().colwise() / w.rowwise().sum().array();
  const long u = n - l;
  Eigen::MatrixXd y(l, static_cast<long>(labels.cols()));
  for (long i = 0; i < l; ++i) {
    for (long t = 0; t < y.cols(); ++t) y(i, t) = labels(static_cast<std::size_t>(i), static_cast<std::size_t>(t));
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(u, u) - p.bottomRightCorner(u, u);
  return a.partialPivLu().solve(p.bottomLeftCorner(u, l) * y);
}

TEST(LabelPropagation, IdenticalUnlabeledSamplesReachTheLabel) {
  const Tensor labeled = Tensor::from_rows({{0.0, 0.0}});
  const Tensor labels = Tensor::from_rows({{1.0, 0.0, 1.0}});
  const Tensor unlabeled = Tensor::from_rows({{0.3, 0.1}, {0.3, 0.1}});
  LpConfig cfg;
  cfg.tol = 0.0;
  const LpResult r = label_propagation(labeled, labels, unlabeled, cfg);
  EXPECT_EQ(r.iterations, 200);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(r.scores(0, t), r.scores(1, t));
    EXPECT_NEAR(r.scores(0, t), labels(0, t), 1e-9);
  }
}

TEST(LabelPropagation, VanishingAffinityKeepsThePrior) {
  const Tensor labeled = Tensor::from_rows({{10.0}});
  const Tensor labels = Tensor::from_rows({{1.0, 1.0}});
  const Tensor unlabeled = Tensor::from_rows({{0.0}, {-10.0}});
  LpConfig cfg;
  cfg.gamma = 1e3;
  const LpResult r = label_propagation(labeled, labels, unlabeled, cfg);
  for (double v : r.scores.data()) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(LabelPropagation, ChainMatchesDirectSolve) {
  const Tensor labeled = Tensor::from_rows({{0.0}, {2.0}});
  const Tensor labels = Tensor::from_rows({{1.0}, {0.0}});
  const Tensor unlabeled = Tensor::from_rows({{0.5}});
  LpConfig cfg;
  cfg.tol = 0.0;
  const LpResult r = label_propagation(labeled, labels, unlabeled, cfg);
  EXPECT_NEAR(r.scores(0, 0), harmonic(labeled, labels, unlabeled, 0.25)(0, 0), 1e-6);
}

TEST(LabelPropagation, RandomInstancesMatchDirectSolve) {
  Rng rng = make_rng(1, "test.lp");
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor labeled = random_tensor(4, 2, rng);
    Tensor labels(4, 3);
    std::bernoulli_distribution coin(0.5);
    for (double& v : labels.data()) v = coin(rng) ? 1.0 : 0.0;
    const Tensor unlabeled = random_tensor(5, 2, rng);
    LpConfig cfg;
    cfg.tol = 0.0;
    cfg.max_iter = 2000;
    const LpResult r = label_propagation(labeled, labels, unlabeled, cfg);
    const Eigen::MatrixXd expected = harmonic(labeled, labels, unlabeled, cfg.gamma);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t t = 0; t < 3; ++t) {
        EXPECT_NEAR(r.scores(i, t), expected(static_cast<long>(i), static_cast<long>(t)), 1e-8);
      }
    }
  }
}

TEST(LabelPropagation, UnlabeledOrderDoesNotMatter) {
  Rng rng = make_rng(2, "test.lp");
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor labeled = random_tensor(5, 3, rng);
    const Tensor labels = random_tensor(5, 2, rng, 0.0, 1.0);
    const Tensor unlabeled = random_tensor(6, 3, rng);
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    Tensor shuffled(6, 3);
    for (std::size_t i = 0; i < 6; ++i) {
      const auto src = unlabeled.row(i);
      std::copy(src.begin(), src.end(), shuffled.row(perm[i]).begin());
    }
    LpConfig cfg;
    const Tensor a = label_propagation(labeled, labels, unlabeled, cfg).scores;
    const Tensor b = label_propagation(labeled, labels, shuffled, cfg).scores;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t t = 0; t < 2; ++t) EXPECT_NEAR(b(perm[i], t), a(i, t), 1e-12);
    }
  }
}

TEST(LabelPropagation, ChangesNeverGrowAfterTheFirstIteration) {
  Rng rng = make_rng(3, "test.lp");
  for (int trial = 0; trial < 20; ++trial) {
    LpConfig cfg;
    cfg.tol = 0.0;
    cfg.max_iter = 50;
    const LpResult r = label_propagation(random_tensor(3, 2, rng), random_tensor(3, 2, rng, 0, 1),
                                         random_tensor(8, 2, rng), cfg);
    ASSERT_EQ(r.changes.size(), 50u);
    for (std::size_t k = 1; k + 1 < r.changes.size(); ++k) {
      EXPECT_LE(r.changes[k + 1], r.changes[k] * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST(LabelPropagation, StopsAtTolerance) {
  LpConfig cfg;
  const LpResult r = label_propagation(Tensor::from_rows({{0.0}}), Tensor::from_rows({{1.0}}),
                                       Tensor::from_rows({{0.1}}), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.iterations, 200);
  EXPECT_LT(r.changes.back(), cfg.tol);
}

TEST(LabelPropagation, SampleCapRaisesMemoryBound) {
  LpConfig cfg;
  cfg.max_samples = 5;
  try {
    label_propagation(Tensor(3, 1), Tensor(3, 1), Tensor(3, 1), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMemoryBound);
  }
}

TEST(LabelPropagation, ConfigValidation) {
  for (const auto& mutate : std::vector<void (*)(LpConfig&)>{
           [](LpConfig& c) { c.gamma = 0.0; }, [](LpConfig& c) { c.max_iter = 0; },
           [](LpConfig& c) { c.tol = -1.0; }}) {
    LpConfig c;
    mutate(c);
    try {
      c.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig);
    }
  }
}

TEST(LabelPropagation, LinkWrapperIsDeterministicAndBounded) {
  graph::SyntheticSpec spec;
  spec.num_nodes = 20;
  spec.num_types = 3;
  spec.edge_prob = 0.3;
  spec.seed = 4;
  const graph::Graph g = graph::generate_synthetic(spec);
  const graph::Task task(g, graph::split_edges(g, {0.8, 0.1, 0.1}, 4), 4);
  const Tensor a = lp_predict(task, task.test().pairs, LpConfig{}, 4);
  const Tensor b = lp_predict(task, task.test().pairs, LpConfig{}, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows(), task.test().size());
  for (double v : a.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(PairSamples, SmallerIdFirst) {
  const Tensor x = Tensor::from_rows({{1.0}, {2.0}, {3.0}});
  EXPECT_EQ(pair_samples(x, std::vector<NodePair>{{2, 0}, {0, 2}}),
            Tensor::from_rows({{1.0, 3.0}, {1.0, 3.0}}));
  EXPECT_THROW(pair_samples(x, std::vector<NodePair>{{0, 3}}), Error);
}

TEST(Mlp, ZeroWeightsGiveHalf) {
  MlpModel m{diff::Linear(4, 3), diff::Linear(3, 3), diff::Linear(3, 2)};
  const Tensor p = mlp_predict(m, Tensor(3, 2, 1.0), std::vector<NodePair>{{0, 1}, {1, 2}});
  for (double v : p.data()) EXPECT_EQ(v, 0.5);
}

TEST(Mlp, PredictionIsSymmetric) {
  Rng rng = make_rng(5, "test.mlp");
  const MlpModel m = MlpModel::glorot(6, 8, 3, rng);
  const Tensor x = random_tensor(5, 3, rng);
  EXPECT_EQ(mlp_predict(m, x, std::vector<NodePair>{{4, 1}}),
            mlp_predict(m, x, std::vector<NodePair>{{1, 4}}));
}

TEST(Mlp, SeparableSingleTypeToyIsLearned) {
  // Nodes sit in two clusters with a·x = ±1; an edge joins every pair from
  // the positive cluster, so edges are exactly the pairs with a·(x_u + x_v) ≈ 2.
  Rng rng = make_rng(6, "test.mlp");
  const std::size_t n = 24;
  const std::vector<double> a{0.6, 0.8};
  Tensor x(n, 2);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  for (std::size_t i = 0; i < n; ++i) {
    const double side = i < n / 2 ? 1.0 : -1.0;
    const double along = side + jitter(rng);
    const double across = jitter(rng) * 4.0;
    x(i, 0) = along * a[0] - across * a[1];
    x(i, 1) = along * a[1] + across * a[0];
  }
  std::vector<graph::Edge> edges;
  for (int u = 0; u < static_cast<int>(n / 2); ++u) {
    for (int v = u + 1; v < static_cast<int>(n / 2); ++v) edges.push_back(testing::edge(u, v, {0}, 1));
  }
  const graph::Graph g(x, 1, edges);
  const graph::Task task(g, graph::split_edges(g, {0.8, 0.1, 0.1}, 6), 6);

  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.patience = 200;
  cfg.mlp_hidden = 16;
  const MlpTrainResult r = train_mlp(task, cfg);

  // Early stopping may keep an uncalibrated snapshot, so the check is
  // threshold-free: train edges must outrank every non-edge.
  std::vector<NodePair> pairs = task.train().pairs;
  std::vector<int> truth(pairs.size(), 1);
  for (int u = 0; u < static_cast<int>(n); ++u) {
    for (int v = u + 1; v < static_cast<int>(n); ++v) {
      if (!g.has_edge(u, v)) {
        pairs.push_back({u, v});
        truth.push_back(0);
      }
    }
  }
  const Tensor p = mlp_predict(r.model, x, pairs);
  EXPECT_GE(eval::roc_auc(p.data(), truth), 0.95);
  EXPECT_LT(r.train_loss.back(), r.train_loss.front());
}

TEST(Mlp, TrainingIsDeterministic) {
  graph::SyntheticSpec spec;
  spec.num_nodes = 20;
  spec.num_types = 3;
  spec.edge_prob = 0.3;
  spec.seed = 7;
  const graph::Graph g = graph::generate_synthetic(spec);
  const graph::Task task(g, graph::split_edges(g, {0.8, 0.1, 0.1}, 7), 7);
  TrainConfig cfg;
  cfg.max_epochs = 10;
  cfg.mlp_hidden = 8;
  const MlpTrainResult a = train_mlp(task, cfg);
  const MlpTrainResult b = train_mlp(task, cfg);
  EXPECT_EQ(a.train_loss, b.train_loss);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

}  // namespace
}  // namespace genn::baselines
