// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/cli/commands.hpp"

#include <Eigen/Core>
#include <fstream>
#include <json.hpp>

#include "genn/cli/checkpoint.hpp"
#include "genn/cli/run_config.hpp"
#include "genn/cli/selftest.hpp"
#include "genn/common/error.hpp"
#include "genn/eval/experiments.hpp"
#include "genn/graph/io.hpp"

namespace genn::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text << '\n';
}

json versions() {
  return {{"genn", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

void write_manifest(const CommandOptions& o, const RunConfig* config, std::uint64_t seed) {
  json m = {{"command", o.command}, {"seed", seed}, {"versions", versions()}};
  if (config != nullptr) {
    m["config_hash"] = config_hash(*config);
    m["config"] = json::parse(canonical_json(*config));
    m["method"] = std::string(eval::to_string(config->method));
  } else {
    m["config_hash"] = nullptr;
  }
  write_text(o.out / "manifest.json", m.dump(2));
}

RunConfig resolve_config(const CommandOptions& o) {
  if (!o.config) fail(ErrorCode::kConfig, "--config is required for " + o.command);
  RunConfig c = load_run_config(*o.config);
  if (o.seed) c.override_seed(*o.seed);
  if (o.method) c.method = eval::parse_method(*o.method);
  c.validate();
  return c;
}

ModelDims dims_of(const graph::Graph& g) { return {g.feature_dim(), g.num_types()}; }

void check_dims(const fs::path& path, const graph::Graph& g) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kCheckpoint, std::string("checkpoint: not valid JSON: ") + e.what());
  }
  const auto d = j.value("feature_dim", std::size_t{0});
  const auto l = j.value("num_types", std::size_t{0});
  if (d != g.feature_dim() || l != g.num_types()) {
    fail(ErrorCode::kCheckpoint, "checkpoint was trained on D=" + std::to_string(d) +
                                     ", L=" + std::to_string(l) + " but the data has D=" +
                                     std::to_string(g.feature_dim()) +
                                     ", L=" + std::to_string(g.num_types()));
  }
}

int cmd_synth(const CommandOptions& o, std::ostream& log) {
  const RunConfig c = resolve_config(o);
  const graph::Graph g = load_data(c);
  graph::write_graph(g, o.out / "nodes.csv", o.out / "edges.csv");
  graph::write_split(make_split(c, g), o.out / "split.csv");
  write_manifest(o, &c, c.seed);
  log << "wrote " << g.num_nodes() << " nodes and " << g.num_edges() << " edges to "
      << o.out.string() << '\n';
  return kExitOk;
}

int cmd_train(const CommandOptions& o, std::ostream& log) {
  const RunConfig c = resolve_config(o);
  const graph::Graph g = load_data(c);
  const graph::Task task(g, make_split(c, g), c.seed);
  const eval::TrainedModel model = eval::train_method(c.method, task, c.settings);
  save_checkpoint(o.out / "checkpoint.json", model, dims_of(g));
  {
    auto out = open_out(o.out / "epoch_log.csv");
    trainer::write_epoch_log(out, model.log);
  }
  write_manifest(o, &c, c.seed);
  log << eval::to_string(c.method) << ": best epoch " << model.best_epoch << ", checkpoint "
      << (o.out / "checkpoint.json").string() << '\n';
  return kExitOk;
}

int cmd_eval(const CommandOptions& o, std::ostream& log) {
  const RunConfig c = resolve_config(o);
  const graph::Graph g = load_data(c);
  const fs::path path = o.checkpoint.value_or(o.out / "checkpoint.json");
  check_dims(path, g);
  const eval::TrainedModel model = load_checkpoint(path);
  const graph::Task task(g, make_split(c, g), c.seed);
  const eval::MetricsReport report = eval::evaluate_test(model, task);
  write_text(o.out / "metrics.json", eval::metrics_json(report));
  write_manifest(o, &c, c.seed);
  log << eval::to_string(model.method) << ": test macro PR-AUC "
      << (report.macro_pr_auc ? graph::format_double(*report.macro_pr_auc) : "n/a") << '\n';
  return kExitOk;
}

int cmd_robustness(const CommandOptions& o, std::ostream& log) {
  const RunConfig c = resolve_config(o);
  const graph::Graph g = load_data(c);
  const auto rows = eval::robustness_sweep(g, c.fractions, c.seeds, c.sweep_methods, c.settings,
                                           eval::thread_cap());
  const auto summary = eval::summarize(rows);
  {
    auto out = open_out(o.out / "robustness.csv");
    eval::write_sweep_csv(out, rows);
  }
  {
    auto out = open_out(o.out / "robustness_summary.csv");
    eval::write_summary_csv(out, summary);
  }
  write_manifest(o, &c, c.seed);
  eval::write_summary_csv(log, summary);
  return kExitOk;
}

int cmd_correlate(const CommandOptions& o, std::ostream& log) {
  const RunConfig c = resolve_config(o);
  const graph::Graph g = load_data(c);
  const graph::Task task(g, make_split(c, g), c.seed);
  eval::TrainedModel model;
  if (o.checkpoint) {
    check_dims(*o.checkpoint, g);
    model = load_checkpoint(*o.checkpoint);
  } else {
    model = eval::train_method(c.method, task, c.settings);
  }
  const diff::Tensor scores = eval::predict(model, task, task.test().pairs);
  const auto rows =
      eval::type_correlations(task, scores, c.correlation_threshold, c.correlation_pairs);
  {
    auto out = open_out(o.out / "correlation.csv");
    eval::write_correlation_csv(out, rows);
  }
  write_manifest(o, &c, c.seed);
  log << "wrote " << rows.size() << " type pairs to " << (o.out / "correlation.csv").string()
      << '\n';
  return kExitOk;
}

int cmd_selftest(const CommandOptions& o, std::ostream& log) {
  const std::uint64_t seed = o.seed.value_or(0);
  const auto checks = run_selftest(seed);
  json results = json::array();
  bool ok = true;
  for (const CheckResult& r : checks) {
    ok = ok && r.passed;
    results.push_back(
        {{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"tolerance", r.tolerance}});
    log << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << graph::format_double(r.value)
        << " <= " << graph::format_double(r.tolerance) << ")\n";
  }
  write_text(o.out / "selftest.json", json{{"passed", ok}, {"checks", results}}.dump(2));
  write_manifest(o, nullptr, seed);
  if (!ok) fail(ErrorCode::kInvalidArgument, "selftest failed");
  return kExitOk;
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(options.out, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create " + options.out.string() + ": " + ec.message());
    const std::string& c = options.command;
    if (c == "synth") return cmd_synth(options, log);
    if (c == "train") return cmd_train(options, log);
    if (c == "eval") return cmd_eval(options, log);
    if (c == "robustness") return cmd_robustness(options, log);
    if (c == "correlate") return cmd_correlate(options, log);
    if (c == "selftest") return cmd_selftest(options, log);
    fail(ErrorCode::kConfig, "unknown command '" + c + "'");
  } catch (const std::exception& e) {
    return report_failure(e, options.out, err);
  }
}

int report_failure(const std::exception& e, const fs::path& out, std::ostream& err) {
  const auto* ge = dynamic_cast<const Error*>(&e);
  const bool config = ge != nullptr && ge->code() == ErrorCode::kConfig;
  const json j = {{"error",
                   {{"code", ge != nullptr ? std::string(to_string(ge->code())) : "internal"},
                    {"message", e.what()}}}};
  err << j.dump() << '\n';
  std::error_code ec;
  fs::create_directories(out, ec);
  std::ofstream file(out / "error.json");
  if (file) file << j.dump(2) << '\n';
  return config ? kExitConfig : kExitRuntime;
}

}  // namespace genn::cli
