// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "genn/common/error.hpp"
#include "genn/diff/gradcheck.hpp"
#include "genn/diff/nn.hpp"
#include "genn/diff/tape.hpp"
#include "test_util.hpp"

namespace genn::diff {
namespace {

using testing::random_tensor;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::shared_ptr<const EdgeIndex> path_index() {
  auto idx = std::make_shared<EdgeIndex>();
  idx->num_nodes = 4;
  idx->pairs = {{0, 1}, {1, 2}, {2, 3}, {0, 2}};
  idx->node_weight = {1.0, 1.0, 1.0, 1.0};
  return idx;
}

TEST(Tape, ReluExample) {
  Tape t;
  const NodeId y = t.relu(t.constant(Tensor::from_rows({{-1.0, 2.0}})));
  EXPECT_EQ(t.value(y), Tensor::from_rows({{0.0, 2.0}}));
}

TEST(Tape, SigmoidAtZero) {
  Tape t;
  EXPECT_DOUBLE_EQ(t.value(t.sigmoid(t.constant(Tensor::scalar(0.0)))).item(), 0.5);
}

TEST(Tape, SigmoidIsStableForLargeInputs) {
  Tape t;
  const Tensor& v = t.value(t.sigmoid(t.constant(Tensor::from_rows({{-800.0, 800.0}}))));
  EXPECT_EQ(v(0, 0), 0.0);
  EXPECT_EQ(v(0, 1), 1.0);
}

TEST(Tape, MatmulExample) {
  Tape t;
  const NodeId y = t.matmul(t.constant(Tensor::from_rows({{1, 2}, {3, 4}})),
                            t.constant(Tensor::from_rows({{1}, {1}})));
  EXPECT_EQ(t.value(y), Tensor::from_rows({{3}, {7}}));
}

TEST(Tape, MatmulShapeMismatchNamesBothShapes) {
  Tape t;
  try {
    t.matmul(t.constant(Tensor(2, 3)), t.constant(Tensor(2, 3)));
    FAIL() << "expected a shape error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("2x3"), std::string::npos) << e.what();
  }
}

TEST(Tape, OverflowIsNonFinite) {
  Tape t;
  const NodeId big = t.constant(Tensor::scalar(std::numeric_limits<double>::max()));
  try {
    t.add(big, big);
    FAIL() << "expected a non-finite error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(Backward, MeanGradient) {
  Tape t;
  const NodeId x = t.variable(Tensor::from_rows({{2.0, 4.0}}));
  const Gradients g = t.backward(t.mean(x));
  EXPECT_EQ(g[x], Tensor::from_rows({{0.5, 0.5}}));
}

TEST(Backward, ReluFlatRegion) {
  Tape t;
  const NodeId x = t.variable(Tensor::scalar(-3.0));
  EXPECT_EQ(t.backward(t.sum(t.relu(x)))[x].item(), 0.0);
}

TEST(Backward, ReluSubgradientAtZeroIsZero) {
  Tape t;
  const NodeId x = t.variable(Tensor::scalar(0.0));
  EXPECT_EQ(t.backward(t.sum(t.relu(x)))[x].item(), 0.0);
}

TEST(Backward, SigmoidSlopeMatchesCentralDifference) {
  Tape t;
  const NodeId x = t.variable(Tensor::scalar(0.0));
  const double analytic = t.backward(t.sum(t.sigmoid(x)))[x].item();
  const double h = 1e-6;
  const double numeric = (sigmoid(h) - sigmoid(-h)) / (2 * h);
  EXPECT_NEAR(analytic, numeric, 1e-8);
  EXPECT_NEAR(analytic, 0.25, 1e-12);
}

TEST(Backward, LossGradientOfItselfIsOne) {
  Tape t;
  const NodeId x = t.variable(Tensor::from_rows({{1.0, -2.0}}));
  const NodeId loss = t.sum(t.mul(x, x));
  EXPECT_EQ(t.backward(loss)[loss].item(), 1.0);
}

TEST(Backward, UnreachableNodeHasZeroGradient) {
  Tape t;
  const NodeId x = t.variable(Tensor::from_rows({{1.0, 2.0}}));
  const NodeId unused = t.variable(Tensor::from_rows({{3.0}}));
  const Gradients g = t.backward(t.sum(x));
  EXPECT_EQ(g[unused], Tensor(1, 1));
}

TEST(Backward, NonScalarLossIsRejected) {
  Tape t;
  const NodeId x = t.variable(Tensor(2, 2, 1.0));
  try {
    t.backward(x);
    FAIL() << "expected non-scalar loss error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonScalarLoss);
  }
}

TEST(FiniteDifference, Square) {
  const ScalarFunction f = [](const Tensor& p, Tensor* g) {
    if (g != nullptr) *g = Tensor::scalar(2 * p.item());
    return p.item() * p.item();
  };
  EXPECT_LT(finite_difference_check(f, Tensor::scalar(3.0), 1e-6), 1e-5);
}

TEST(FiniteDifference, ConstantFunctionHasZeroError) {
  const ScalarFunction f = [](const Tensor& p, Tensor* g) {
    if (g != nullptr) *g = Tensor(p.rows(), p.cols());
    return 7.0;
  };
  EXPECT_EQ(finite_difference_check(f, Tensor::from_rows({{1.0, 2.0}}), 1e-6), 0.0);
}

TEST(FiniteDifference, DetectsWrongGradient) {
  const ScalarFunction f = [](const Tensor& p, Tensor* g) {
    if (g != nullptr) *g = Tensor::scalar(p.item());
    return p.item() * p.item();
  };
  EXPECT_GT(finite_difference_check(f, Tensor::scalar(3.0), 1e-6), 0.1);
}

TEST(FiniteDifference, PropagatesNonFinite) {
  const ScalarFunction f = [](const Tensor& p, Tensor*) {
    Tape t;
    return t.value(t.scale(t.constant(p), std::numeric_limits<double>::infinity())).item();
  };
  EXPECT_THROW(finite_difference_check(f, Tensor::scalar(1.0), 1e-6), Error);
}

// One differentiable op under test: input shapes, how to draw a point, and
// the forward construction.
struct OpCase {
  const char* name;
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  std::function<NodeId(Tape&, const std::vector<NodeId>&)> build;
  double kink_margin = 0.0;  // keep |x| (or |a−b|) above this
  bool kink_on_difference = false;
};

ScalarFunction op_objective(const OpCase& c, const Tensor& weights_seed) {
  return [&c, weights_seed](const Tensor& point, Tensor* grad) {
    Tape t;
    std::vector<NodeId> ins;
    std::size_t offset = 0;
    for (auto [r, cols] : c.shapes) {
      Tensor v(r, cols);
      for (double& x : v.data()) x = point[offset++];
      ins.push_back(t.variable(std::move(v)));
    }
    const NodeId out = c.build(t, ins);
    // Random projection of the output to a scalar.
    Tensor w(t.value(out).rows(), t.value(out).cols());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights_seed[i % weights_seed.size()];
    const NodeId loss = t.sum(t.mul(out, t.constant(std::move(w))));
    if (grad != nullptr) {
      const Gradients g = t.backward(loss);
      *grad = Tensor(1, point.size());
      std::size_t k = 0;
      for (NodeId id : ins) {
        for (double v : g[id].data()) (*grad)[k++] = v;
      }
    }
    return t.value(loss).item();
  };
}

Tensor draw_point(const OpCase& c, Rng& rng) {
  std::size_t n = 0;
  for (auto [r, cols] : c.shapes) n += r * cols;
  Tensor p = random_tensor(1, n, rng, -2.0, 2.0);
  if (c.kink_margin > 0.0 && !c.kink_on_difference) {
    for (double& v : p.data()) {
      if (std::abs(v) < c.kink_margin) v = v < 0 ? v - 2 * c.kink_margin : v + 2 * c.kink_margin;
    }
  }
  if (c.kink_on_difference) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
      if (std::abs(p[i] - p[half + i]) < c.kink_margin) p[half + i] = p[i] + 3 * c.kink_margin;
    }
  }
  return p;
}

std::vector<OpCase> op_cases() {
  const auto idx = path_index();
  return {
      {"matmul", {{3, 4}, {4, 2}}, [](Tape& t, auto& in) { return t.matmul(in[0], in[1]); }},
      {"matmul_bt", {{3, 4}, {2, 4}}, [](Tape& t, auto& in) { return t.matmul_bt(in[0], in[1]); }},
      {"add", {{2, 3}, {2, 3}}, [](Tape& t, auto& in) { return t.add(in[0], in[1]); }},
      {"add_bias", {{3, 2}, {1, 2}}, [](Tape& t, auto& in) { return t.add_bias(in[0], in[1]); }},
      {"sub", {{2, 3}, {2, 3}}, [](Tape& t, auto& in) { return t.sub(in[0], in[1]); }},
      {"mul", {{2, 3}, {2, 3}}, [](Tape& t, auto& in) { return t.mul(in[0], in[1]); }},
      {"scale", {{2, 3}}, [](Tape& t, auto& in) { return t.scale(in[0], -1.7); }},
      {"relu", {{3, 3}}, [](Tape& t, auto& in) { return t.relu(in[0]); }, 1e-3},
      {"sigmoid", {{3, 3}}, [](Tape& t, auto& in) { return t.sigmoid(in[0]); }},
      {"mean", {{3, 2}}, [](Tape& t, auto& in) { return t.mean(in[0]); }},
      {"sum", {{3, 2}}, [](Tape& t, auto& in) { return t.sum(in[0]); }},
      {"mean_rows", {{4, 2}}, [](Tape& t, auto& in) { return t.mean_rows(in[0]); }},
      {"concat_cols", {{2, 2}, {2, 3}}, [](Tape& t, auto& in) { return t.concat_cols(in[0], in[1]); }},
      {"concat_rows", {{2, 3}, {1, 3}}, [](Tape& t, auto& in) { return t.concat_rows(in[0], in[1]); }},
      {"gather_rows", {{3, 2}},
       [](Tape& t, auto& in) { return t.gather_rows(in[0], {2, 0, 2, 1}); }},
      {"edge_message", {{4, 4}, {4, 2}},
       [idx](Tape& t, auto& in) { return t.edge_message(in[0], in[1], idx); }},
      {"incidence_sum", {{4, 3}},
       [idx](Tape& t, auto& in) { return t.incidence_sum(in[0], idx); }},
      {"batch_norm_train", {{5, 2}, {1, 2}, {1, 2}},
       [](Tape& t, auto& in) { return t.batch_norm_train(in[0], in[1], in[2]); }},
      {"l1_distance", {{2, 3}, {2, 3}}, [](Tape& t, auto& in) { return t.l1_distance(in[0], in[1]); },
       1e-3, true},
      {"bce_with_logits", {{3, 2}, {3, 2}},
       [](Tape& t, auto& in) { return t.bce_with_logits(in[0], t.sigmoid(in[1])); }},
  };
}

TEST(GradientProperty, EveryOpMatchesFiniteDifferencesAtRandomPoints) {
  Rng rng = make_rng(11, "test.ops");
  for (const OpCase& c : op_cases()) {
    for (int trial = 0; trial < 100; ++trial) {
      const Tensor w = random_tensor(1, 7, rng);
      const double err = finite_difference_check(op_objective(c, w), draw_point(c, rng), 1e-6);
      ASSERT_LT(err, 1e-4) << c.name << " trial " << trial;
    }
  }
}

TEST(GradientProperty, BackwardIsLinearInTheLoss) {
  Rng rng = make_rng(12, "test.linearity");
  for (int trial = 0; trial < 20; ++trial) {
    Tape t;
    const NodeId x = t.variable(random_tensor(3, 3, rng));
    const NodeId a = t.sum(t.sigmoid(t.matmul(x, x)));
    const NodeId b = t.mean(t.relu(t.scale(x, 2.0)));
    const Gradients ga = t.backward(a);
    const Gradients gb = t.backward(b);
    const Gradients gsum = t.backward(t.add(a, b));
    Tensor expected = ga[x];
    expected += gb[x];
    EXPECT_LT(max_abs_diff(gsum[x], expected), 1e-12);
  }
}

TEST(BatchNorm, InferenceWithAbsorbedBatchStatsMatchesTraining) {
  Rng rng = make_rng(13, "test.bn");
  BatchNorm bn(3);
  bn.gamma = random_tensor(1, 3, rng, 0.5, 1.5);
  bn.beta = random_tensor(1, 3, rng);
  const Tensor x = random_tensor(6, 3, rng, -3.0, 3.0);

  Tape train_tape;
  Context train(train_tape, true);
  const Tensor y_train = train_tape.value(bn.forward(train, train_tape.constant(x)));
  bn.absorb_all(train, 0.0);

  Tape infer_tape;
  Context infer(infer_tape, false);
  const Tensor y_infer = infer_tape.value(bn.forward(infer, infer_tape.constant(x)));
  EXPECT_LT(max_abs_diff(y_train, y_infer), 1e-8);
}

TEST(BatchNorm, RunningAverageUsesMomentum) {
  BatchNorm bn(1);
  Tape t;
  Context ctx(t, true);
  bn.forward(ctx, t.constant(Tensor::from_rows({{1.0}, {3.0}})));
  bn.absorb_all(ctx);
  // Fresh running stats are mean 0, var 1; the batch has mean 2, var 1.
  EXPECT_NEAR(bn.running_mean(0, 0), 0.9 * 0.0 + 0.1 * 2.0, 1e-12);
  EXPECT_NEAR(bn.running_var(0, 0), 0.9 * 1.0 + 0.1 * 1.0, 1e-12);
}

TEST(Optim, ClipGlobalNormRescales) {
  std::vector<Tensor> g{Tensor::from_rows({{3.0}}), Tensor::from_rows({{4.0}})};
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 1.0), 5.0);
  EXPECT_NEAR(global_norm(g), 1.0, 1e-12);
  EXPECT_NEAR(g[0].item(), 0.6, 1e-12);
}

TEST(Optim, AdamFirstStepMovesByLearningRate) {
  Tensor w = Tensor::from_rows({{1.0, -1.0}});
  ParamList params{{"w", &w, ParamRole::kTrainable}};
  Adam adam(0.1);
  adam.step(params, {Tensor::from_rows({{2.0, -0.5}})});
  // Bias-corrected first step is lr·sign(g) up to eps.
  EXPECT_NEAR(w(0, 0), 0.9, 1e-6);
  EXPECT_NEAR(w(0, 1), -0.9, 1e-6);
}

TEST(Linear, GlorotBoundsAndZeroBias) {
  Rng rng = make_rng(14, "test.glorot");
  const Linear l = Linear::glorot(10, 6, rng);
  const double bound = std::sqrt(6.0 / 16.0);
  for (double v : l.weight.data()) EXPECT_LE(std::abs(v), bound);
  for (double v : l.bias.data()) EXPECT_EQ(v, 0.0);
}

TEST(Params, FlattenRoundTrip) {
  Rng rng = make_rng(15, "test.flatten");
  Linear l = Linear::glorot(3, 2, rng);
  const ParamList params = parameters_of(l);
  const Tensor flat = flatten(params);
  EXPECT_EQ(flat.size(), 8u);
  Tensor shifted = flat;
  for (double& v : shifted.data()) v += 1.0;
  unflatten(shifted, params);
  EXPECT_NEAR(l.bias(0, 1), flat[7] + 1.0, 1e-15);
}

}  // namespace
}  // namespace genn::diff
