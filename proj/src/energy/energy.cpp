// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/energy/energy.hpp"

#include <string>
#include <type_traits>

#include "genn/common/error.hpp"

namespace genn::energy {

EnergyParams EnergyParams::glorot(std::size_t feature_dim, std::size_t num_types,
                                  std::size_t dim, std::size_t num_layers,
                                  std::size_t readout_hidden, Rng& rng) {
  EnergyParams p;
  p.encoder = mpnn::Encoder::glorot(feature_dim, num_types, dim, num_layers, rng);
  p.hidden = Linear::glorot(dim, readout_hidden, rng);
  p.output = Linear(readout_hidden, 1);
  p.output.bias.fill(kInitialReadoutBias);
  return p;
}

LocalEnergyParams LocalEnergyParams::glorot(std::size_t feature_dim, std::size_t num_types,
                                            Rng& rng) {
  return {Linear::glorot(feature_dim, 1, rng), Linear::glorot(num_types, feature_dim, rng)};
}

NodeId genn_energy(Context& ctx, const EnergyParams& params, NodeId features, NodeId labels,
                   const std::shared_ptr<const EdgeIndex>& edges) {
  auto& tape = ctx.tape;
  const NodeId h = params.encoder.forward(ctx, features, labels, edges);
  const NodeId pooled = tape.mean_rows(h);
  const NodeId hidden = tape.relu(params.hidden.forward(ctx, pooled));
  return tape.relu(params.output.forward(ctx, hidden));
}

NodeId glenn_energy(Context& ctx, const LocalEnergyParams& params, NodeId features,
                    NodeId labels, const std::shared_ptr<const EdgeIndex>& edges) {
  auto& tape = ctx.tape;
  const Tensor& y = tape.value(labels);
  if (y.rows() != edges->pairs.size()) {
    fail(ErrorCode::kShapeMismatch, "glenn_energy: " + std::to_string(y.rows()) +
                                        " label rows for " + std::to_string(edges->pairs.size()) +
                                        " edges");
  }
  NodeId node_input = features;
  if (!edges->pairs.empty()) {
    node_input = tape.add(features, tape.incidence_sum(params.f2.forward(ctx, labels), edges));
  }
  return tape.sum(params.f1.forward(ctx, node_input));
}

NodeId evaluate(Context& ctx, const EnergyModel& model, NodeId features, NodeId labels,
                const std::shared_ptr<const EdgeIndex>& edges) {
  return std::visit(
      [&](const auto& params) -> NodeId {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, EnergyParams>) {
          return genn_energy(ctx, params, features, labels, edges);
        } else {
          return glenn_energy(ctx, params, features, labels, edges);
        }
      },
      model);
}

diff::ParamList parameters(EnergyModel& model, std::string_view prefix) {
  return std::visit([&](auto& params) { return diff::parameters_of(params, prefix); }, model);
}

double genn_energy(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
                   const EnergyParams& params, Aggregation aggregation) {
  diff::Tape tape;
  Context ctx(tape);
  const auto index = mpnn::make_edge_index(features.rows(), edges, aggregation);
  return tape.value(genn_energy(ctx, params, tape.constant(features), tape.constant(labels), index))
      .item();
}

double glenn_energy(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
                    const LocalEnergyParams& params) {
  diff::Tape tape;
  Context ctx(tape);
  const auto index = mpnn::make_edge_index(features.rows(), edges);
  return tape.value(glenn_energy(ctx, params, tape.constant(features), tape.constant(labels), index))
      .item();
}

double energy_gap(const Tensor& features, std::span<const NodePair> edges, const Tensor& truth,
                  const Tensor& predicted, const EnergyParams& params, Aggregation aggregation) {
  if (!truth.same_shape(predicted)) {
    fail(ErrorCode::kShapeMismatch, "energy_gap: truth " + truth.shape_string() +
                                        " vs prediction " + predicted.shape_string());
  }
  return genn_energy(features, edges, predicted, params, aggregation) -
         genn_energy(features, edges, truth, params, aggregation);
}

}  // namespace genn::energy
