// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "genn/baselines/baselines.hpp"
#include "genn/eval/metrics.hpp"
#include "genn/graph/task.hpp"
#include "genn/mpnn/gnn.hpp"
#include "genn/trainer/genn.hpp"

namespace genn::eval {

enum class Method { kLp, kMlp, kGnn, kGlenn, kGennMinus, kGenn };

std::string_view to_string(Method method) noexcept;
/// Accepts lp, mlp, gnn, glenn, genn_minus, genn; throws kConfig otherwise.
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct MethodSettings {
  TrainConfig train;
  baselines::LpConfig lp;
};

/// Label propagation keeps no parameters; it is rerun at prediction time.
struct LpModel {
  baselines::LpConfig config;
  std::uint64_t seed = 0;
};

struct GennModel {
  energy::EnergyModel theta;
  trainer::InferencePair pair;
};

using Model = std::variant<LpModel, baselines::MlpModel, mpnn::MpnnParams, GennModel>;

struct TrainedModel {
  Method method = Method::kGenn;
  Model model;
  TrainConfig config;
  std::vector<trainer::EpochLog> log;  // single-model methods fill epoch, bce_phi and val_prauc
  int best_epoch = 0;
};

TrainedModel train_method(Method method, const graph::Task& task, const MethodSettings& settings);

/// Per-type probabilities for `queries`, which must not be training edges.
Tensor predict(const TrainedModel& model, const graph::Task& task,
               std::span<const NodePair> queries);

/// Metrics of the model on the task's test pairs.
MetricsReport evaluate_test(const TrainedModel& model, const graph::Task& task);

std::string metrics_json(const MetricsReport& report, int indent = 2);

}  // namespace genn::eval
