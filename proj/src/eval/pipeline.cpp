// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/eval/pipeline.hpp"

#include <json.hpp>
#include <string>

#include "genn/common/error.hpp"

namespace genn::eval {
namespace {

std::vector<trainer::EpochLog> single_model_log(const std::vector<double>& loss,
                                                const std::vector<double>& val) {
  std::vector<trainer::EpochLog> out;
  for (std::size_t i = 0; i < val.size(); ++i) {
    trainer::EpochLog e;
    e.epoch = static_cast<int>(i);
    e.bce_phi = i == 0 ? 0.0 : loss.at(i - 1);
    e.val_prauc = val[i];
    out.push_back(e);
  }
  return out;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kLp: return "lp";
    case Method::kMlp: return "mlp";
    case Method::kGnn: return "gnn";
    case Method::kGlenn: return "glenn";
    case Method::kGennMinus: return "genn_minus";
    case Method::kGenn: return "genn";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorCode::kConfig, "unknown method '" + std::string(name) +
                               "' (expected lp, mlp, gnn, glenn, genn_minus or genn)");
}

std::vector<Method> all_methods() {
  return {Method::kLp, Method::kMlp, Method::kGnn, Method::kGlenn, Method::kGennMinus,
          Method::kGenn};
}

TrainedModel train_method(Method method, const graph::Task& task, const MethodSettings& settings) {
  TrainedModel out;
  out.method = method;
  out.config = settings.train;
  switch (method) {
    case Method::kLp:
      settings.lp.validate();
      out.model = LpModel{settings.lp, settings.train.seed};
      break;
    case Method::kMlp: {
      auto r = baselines::train_mlp(task, settings.train);
      out.log = single_model_log(r.train_loss, r.val_pr_auc);
      out.best_epoch = r.best_epoch;
      out.model = std::move(r.model);
      break;
    }
    case Method::kGnn: {
      auto r = mpnn::train_gnn_baseline(task, settings.train);
      out.log = single_model_log(r.train_loss, r.val_pr_auc);
      out.best_epoch = r.best_epoch;
      out.model = std::move(r.params);
      break;
    }
    case Method::kGlenn:
    case Method::kGennMinus:
    case Method::kGenn: {
      const auto mode =
          method == Method::kGennMinus ? trainer::GennMode::kNoJoint : trainer::GennMode::kFull;
      const auto energy =
          method == Method::kGlenn ? trainer::EnergyKind::kLocal : trainer::EnergyKind::kGlobal;
      auto r = trainer::train_genn(task, settings.train, mode, energy);
      out.log = std::move(r.log);
      out.best_epoch = r.best_epoch;
      out.model = GennModel{std::move(r.theta), std::move(r.pair)};
      break;
    }
  }
  return out;
}

Tensor predict(const TrainedModel& model, const graph::Task& task,
               std::span<const NodePair> queries) {
  for (const NodePair& p : queries) {
    if (task.is_train_edge(p)) {
      fail(ErrorCode::kQueryOverlapsTrain, "query pair (" + std::to_string(p.u) + "," +
                                               std::to_string(p.v) + ") is a training edge");
    }
  }
  const Aggregation agg = model.config.aggregation;
  return std::visit(
      [&](const auto& m) -> Tensor {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LpModel>) {
          return baselines::lp_predict(task, queries, m.config, m.seed);
        } else if constexpr (std::is_same_v<T, baselines::MlpModel>) {
          return baselines::mlp_predict(m, task.graph().features(), queries);
        } else if constexpr (std::is_same_v<T, mpnn::MpnnParams>) {
          return mpnn::gnn_predict(m, mpnn::observed_graph(task, agg), queries);
        } else {
          return trainer::infer(m.pair, task, queries, agg);
        }
      },
      model.model);
}

MetricsReport evaluate_test(const TrainedModel& model, const graph::Task& task) {
  return evaluate(predict(model, task, task.test().pairs), task.test().labels);
}

std::string metrics_json(const MetricsReport& report, int indent) {
  nlohmann::json j;
  j["macro_roc_auc"] = optional_json(report.macro_roc_auc);
  j["macro_pr_auc"] = optional_json(report.macro_pr_auc);
  j["p_at_1"] = optional_json(report.p_at_1);
  j["p_at_5"] = optional_json(report.p_at_5);
  j["num_edges"] = report.num_edges;
  j["num_positive"] = report.num_positive;
  j["labels_skipped"] = report.labels_skipped;
  nlohmann::json roc = nlohmann::json::array();
  nlohmann::json pr = nlohmann::json::array();
  for (const auto& v : report.roc_auc) roc.push_back(optional_json(v));
  for (const auto& v : report.pr_auc) pr.push_back(optional_json(v));
  j["roc_auc"] = std::move(roc);
  j["pr_auc"] = std::move(pr);
  return j.dump(indent);
}

}  // namespace genn::eval
