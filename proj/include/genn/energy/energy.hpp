// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <variant>

#include "genn/mpnn/mpnn.hpp"

namespace genn::energy {

using diff::Context;
using diff::EdgeIndex;
using diff::Linear;
using diff::NodeId;
using diff::Tensor;

/// Global energy E = ReLU(MLP(mean_i h_i)) with h from its own encoder.
/// Fresh parameters have a zero output weight, so E starts at the bias.
struct EnergyParams {
  static constexpr double kInitialReadoutBias = 0.5;

  mpnn::Encoder encoder;
  Linear hidden;  // M → H, ReLU
  Linear output;  // H → 1, ReLU

  static EnergyParams glorot(std::size_t feature_dim, std::size_t num_types, std::size_t dim,
                             std::size_t num_layers, std::size_t readout_hidden, Rng& rng);

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    mpnn::Encoder::visit(self.encoder, diff::join_name(prefix, "encoder"), fn);
    Linear::visit(self.hidden, diff::join_name(prefix, "readout_hidden"), fn);
    Linear::visit(self.output, diff::join_name(prefix, "readout_output"), fn);
  }
};

/// Local energy E = Σ_i f1(x_i + Σ_{j∈N(i)} f2(e_ij)), both maps affine.
struct LocalEnergyParams {
  Linear f1;  // D → 1
  Linear f2;  // L → D

  static LocalEnergyParams glorot(std::size_t feature_dim, std::size_t num_types, Rng& rng);

  template <class Self, class Fn>
  static void visit(Self& self, std::string_view prefix, Fn&& fn) {
    Linear::visit(self.f1, diff::join_name(prefix, "f1"), fn);
    Linear::visit(self.f2, diff::join_name(prefix, "f2"), fn);
  }
};

NodeId genn_energy(Context& ctx, const EnergyParams& params, NodeId features, NodeId labels,
                   const std::shared_ptr<const EdgeIndex>& edges);
NodeId glenn_energy(Context& ctx, const LocalEnergyParams& params, NodeId features,
                    NodeId labels, const std::shared_ptr<const EdgeIndex>& edges);

using EnergyModel = std::variant<EnergyParams, LocalEnergyParams>;

NodeId evaluate(Context& ctx, const EnergyModel& model, NodeId features, NodeId labels,
                const std::shared_ptr<const EdgeIndex>& edges);
diff::ParamList parameters(EnergyModel& model, std::string_view prefix = {});

// Tape-free scalar forms; `labels` has one row per entry of `edges`.

double genn_energy(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
                   const EnergyParams& params, Aggregation aggregation = Aggregation::kSum);
double glenn_energy(const Tensor& features, std::span<const NodePair> edges, const Tensor& labels,
                    const LocalEnergyParams& params);

/// E(predicted) − E(truth) over the same edge set.
double energy_gap(const Tensor& features, std::span<const NodePair> edges, const Tensor& truth,
                  const Tensor& predicted, const EnergyParams& params,
                  Aggregation aggregation = Aggregation::kSum);

}  // namespace genn::energy
