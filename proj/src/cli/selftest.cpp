// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/cli/selftest.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "genn/baselines/baselines.hpp"
#include "genn/common/rng.hpp"
#include "genn/diff/gradcheck.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/graph/synthetic.hpp"
#include "genn/mpnn/gnn.hpp"
#include "genn/trainer/genn.hpp"

namespace genn::cli {
namespace {

constexpr double kGradTol = 1e-4;
constexpr double kStep = 1e-6;

CheckResult grad_check(std::string name, const diff::ParamList& params,
                       std::function<diff::NodeId(diff::Context&)> objective) {
  const double err =
      diff::finite_difference_check(diff::over_parameters(params, std::move(objective)),
                                    diff::flatten(params), kStep);
  return {std::move(name), err <= kGradTol, err, kGradTol};
}

CheckResult oracle(std::string name, double observed, double expected, double tol) {
  const double err = std::abs(observed - expected);
  return {std::move(name), err <= tol, err, tol};
}

double lp_chain_error() {
  // Three samples on a line: the ends labeled 1 and 0, the middle unlabeled.
  const diff::Tensor labeled = diff::Tensor::from_rows({{0.0}, {2.0}});
  const diff::Tensor labels = diff::Tensor::from_rows({{1.0}, {0.0}});
  const diff::Tensor unlabeled = diff::Tensor::from_rows({{0.5}});
  baselines::LpConfig cfg;
  cfg.tol = 0.0;
  const double iterated = baselines::label_propagation(labeled, labels, unlabeled, cfg).scores(0, 0);

  Eigen::Matrix3d w;
  const double z[3] = {0.0, 2.0, 0.5};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) w(i, j) = std::exp(-cfg.gamma * (z[i] - z[j]) * (z[i] - z[j]));
  }
  const double d = w.row(2).sum();
  const double p_ul = w(2, 0) / d;
  const double p_uu = w(2, 2) / d;
  const double closed = p_ul * 1.0 / (1.0 - p_uu);
  return std::abs(iterated - closed);
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> out;

  graph::SyntheticSpec spec;
  spec.num_nodes = 16;
  spec.num_types = 3;
  spec.edge_prob = 0.25;
  spec.seed = seed;
  const graph::Graph g = graph::generate_synthetic(spec);
  const graph::Task task(g, graph::split_edges(g, {0.6, 0.2, 0.2}, seed), seed);
  TrainConfig config;
  config.hidden_dim = 4;
  config.mlp_hidden = 5;
  config.seed = seed;
  Rng rng = make_rng(seed, "selftest");
  Rng neg_rng = make_rng(seed, "selftest.negatives");
  const graph::LabeledPairs batch =
      task.with_negatives(task.sample_negatives(task.train().size(), neg_rng));

  {
    auto params = mpnn::MpnnParams::glorot(g.feature_dim(), g.num_types(), 4, 2, rng);
    const auto observed = mpnn::observed_graph(task, Aggregation::kSum);
    out.push_back(grad_check("gradient.gnn_loss", diff::trainable(diff::parameters_of(params)),
                             [&](diff::Context& ctx) {
                               return mpnn::gnn_loss(ctx, params, observed, batch);
                             }));
  }

  const auto inputs = trainer::MinimaxInputs::from_task(task, Aggregation::kSum);
  auto pair = trainer::InferencePair::glorot(g.feature_dim(), g.num_types(), 4, 2, 5, rng);
  energy::EnergyModel theta = energy::EnergyParams::glorot(g.feature_dim(), g.num_types(), 4, 2, 5, rng);
  // Move the readout off its zero init so every parameter carries gradient.
  auto& readout = std::get<energy::EnergyParams>(theta).output.weight;
  for (double& v : readout.data()) v = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
  energy::EnergyModel local = energy::LocalEnergyParams::glorot(g.feature_dim(), g.num_types(), rng);
  const diff::Tensor phi = trainer::phi_predictions(pair, inputs);

  out.push_back(grad_check("gradient.global_energy_hinge", diff::trainable(energy::parameters(theta)),
                           [&](diff::Context& ctx) {
                             return trainer::theta_objective(ctx, theta, inputs, phi);
                           }));
  out.push_back(grad_check("gradient.local_energy_hinge", diff::trainable(energy::parameters(local)),
                           [&](diff::Context& ctx) {
                             return trainer::theta_objective(ctx, local, inputs, phi);
                           }));
  out.push_back(grad_check(
      "gradient.inference_objective", diff::trainable(diff::parameters_of(pair)),
      [&](diff::Context& ctx) {
        return trainer::phi_psi_objective(ctx, theta, pair, inputs, batch, config,
                                          trainer::GennMode::kFull);
      }));

  const double roc_scores[] = {0.8, 0.5, 0.5, 0.2};
  const int roc_truth[] = {1, 0, 1, 0};
  out.push_back(oracle("oracle.roc_auc_ties", eval::roc_auc(roc_scores, roc_truth), 0.875, 1e-12));
  const double x[] = {1.0, 2.0, 3.0};
  const double y[] = {1.0, 2.0, 4.0};
  out.push_back(oracle("oracle.pearson", eval::pearson(x, y), 3.0 / std::sqrt(2.0 * 14.0 / 3.0),
                       1e-12));
  diff::Tensor truth(6, 8);
  for (std::size_t r = 0; r < truth.rows(); ++r) truth(r, (r * 3) % 8) = 1.0;
  out.push_back(oracle("oracle.p_at_5_single_type", eval::precision_at_k(truth, truth, 5), 0.2,
                       1e-12));
  out.push_back(oracle("oracle.lp_chain_fixed_point", lp_chain_error(), 0.0, 1e-6));
  return out;
}

}  // namespace genn::cli
