// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "genn/cli/checkpoint.hpp"
#include "genn/cli/commands.hpp"
#include "genn/cli/run_config.hpp"
#include "genn/graph/io.hpp"
#include "test_util.hpp"

namespace genn::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::expect_error;

constexpr const char* kTinyConfig = R"({
  "method": "gnn",
  "seed": 3,
  "seeds": [3, 4],
  "data": {"synthetic": {"num_nodes": 30, "num_types": 4, "edge_prob": 0.3, "seed": 3,
                         "corr_pairs": [{"cause": 0, "effect": 1, "prob": 0.9}]}},
  "train": {"max_epochs": 3, "pretrain_epochs": 3, "finetune_epochs": 3,
            "hidden_dim": 4, "mlp_hidden": 8},
  "robustness": {"fractions": [0.3], "methods": ["mlp", "gnn"]},
  "correlation": {"pairs": [[0, 1], [2, 3]]}
})";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("genn_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

int run(const std::string& command, const fs::path& config, const fs::path& out,
        std::optional<std::string> method = std::nullopt,
        std::optional<fs::path> checkpoint = std::nullopt) {
  CommandOptions o;
  o.command = command;
  o.config = config;
  o.out = out;
  o.method = std::move(method);
  o.checkpoint = std::move(checkpoint);
  std::ostringstream log;
  std::ostringstream err;
  return run_command(o, log, err);
}

TEST(RunConfig, ParsesTheSchema) {
  const RunConfig c = parse_run_config(kTinyConfig);
  EXPECT_EQ(c.method, eval::Method::kGnn);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  ASSERT_TRUE(c.synthetic.has_value());
  EXPECT_EQ(c.synthetic->num_nodes, 30u);
  ASSERT_EQ(c.synthetic->corr_pairs.size(), 1u);
  EXPECT_EQ(c.settings.train.max_epochs, 3);
  EXPECT_EQ(c.settings.train.seed, 3u);
  EXPECT_EQ(c.sweep_methods, (std::vector<eval::Method>{eval::Method::kMlp, eval::Method::kGnn}));
  EXPECT_DOUBLE_EQ(c.correlation_threshold, 0.4);
}

TEST(RunConfig, RejectsInvalidDocuments) {
  const auto config_error = [](const std::string& text, const std::string& fragment) {
    try {
      parse_run_config(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig);
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  const std::string data = R"("data": {"synthetic": {"num_nodes": 20}})";
  config_error("{" + data + R"(, "colour": 1})", "colour");
  config_error("{" + data + R"(, "train": {"lr": 0.1}})", "lr");
  config_error(R"({"method": "gnn"})", "data");
  config_error(R"({"data": {"synthetic": {}, "files": {"nodes": "a", "edges": "b"}}})", "data");
  config_error("{" + data + R"(, "method": "deepwalk"})", "deepwalk");
  config_error("{" + data + R"(, "split": {"train": 0.5, "val": 0.5, "test": 0.5}})", "split");
  config_error("{" + data + R"(, "train": {"patience": 0}})", "patience");
  config_error("{" + data + R"(, "robustness": {"fractions": [1.5]}})", "fraction");
  config_error("{" + data + R"(, "seed": "one"})", "seed");
  config_error("{not json", "");
}

TEST(RunConfig, HashIgnoresKeyOrderAndTracksValues) {
  const RunConfig a = parse_run_config(R"({"seed": 1, "data": {"synthetic": {"num_nodes": 20, "seed": 2}}})");
  const RunConfig b = parse_run_config(R"({"data": {"synthetic": {"seed": 2, "num_nodes": 20}}, "seed": 1})");
  EXPECT_EQ(canonical_json(a), canonical_json(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  RunConfig c = a;
  c.override_seed(9);
  EXPECT_NE(config_hash(c), config_hash(a));
  EXPECT_EQ(c.settings.train.seed, 9u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{9}));
  // The canonical form parses back to the same configuration.
  EXPECT_EQ(config_hash(parse_run_config(canonical_json(c))), config_hash(c));
}

TEST(RunConfig, RelativePathsResolveAgainstTheConfigDirectory) {
  const RunConfig c = parse_run_config(R"({"data": {"files": {"nodes": "n.csv", "edges": "e.csv"}}})",
                                       "/data/run");
  ASSERT_TRUE(c.files.has_value());
  EXPECT_EQ(c.files->nodes, fs::path("/data/run/n.csv"));
  EXPECT_FALSE(c.files->split.has_value());
}

TEST(Checkpoint, RoundTripsEveryMethod) {
  const RunConfig c = parse_run_config(kTinyConfig);
  const graph::Graph g = load_data(c);
  const graph::Task task(g, make_split(c, g), c.seed);
  const ModelDims dims{g.feature_dim(), g.num_types()};
  for (eval::Method m : eval::all_methods()) {
    const eval::TrainedModel model = eval::train_method(m, task, c.settings);
    const std::string text = checkpoint_json(model, dims);
    const eval::TrainedModel back = parse_checkpoint(text);
    EXPECT_EQ(back.method, m);
    EXPECT_EQ(back.best_epoch, model.best_epoch);
    EXPECT_EQ(checkpoint_json(back, dims), text) << eval::to_string(m);
    EXPECT_EQ(eval::predict(back, task, task.test().pairs), eval::predict(model, task, task.test().pairs))
        << eval::to_string(m);
  }
}

TEST(Checkpoint, RejectsDamagedDocuments) {
  const TrainConfig cfg;
  const eval::TrainedModel model = initial_model(eval::Method::kMlp, {3, 2}, cfg, {});
  const json good = json::parse(checkpoint_json(model, {3, 2}));

  json bad_magic = good;
  bad_magic["magic"] = "GENN0";
  json missing = good;
  missing["tensors"].erase(missing["tensors"].begin());
  json extra = good;
  extra["tensors"]["mlp.bogus"] = {{"shape", {1, 1}}, {"data", {0.0}}};
  json wrong_shape = good;
  wrong_shape["tensors"]["mlp.output.bias"]["shape"] = {1, 5};
  json short_data = good;
  short_data["tensors"]["mlp.output.bias"]["data"] = {0.0};
  for (const json* j : {&bad_magic, &missing, &extra, &wrong_shape, &short_data}) {
    expect_error(ErrorCode::kCheckpoint, [&] { parse_checkpoint(j->dump()); });
  }
  expect_error(ErrorCode::kCheckpoint, [] { parse_checkpoint("[1, 2"); });
}

TEST(Commands, SynthIsByteIdentical) {
  const fs::path dir = fresh_dir("synth");
  const fs::path config = write_config(dir, kTinyConfig);
  ASSERT_EQ(run("synth", config, dir / "a"), kExitOk);
  ASSERT_EQ(run("synth", config, dir / "b"), kExitOk);
  for (const char* f : {"nodes.csv", "edges.csv", "split.csv", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  std::ifstream nodes(dir / "a" / "nodes.csv");
  std::ifstream edges(dir / "a" / "edges.csv");
  EXPECT_EQ(graph::read_graph(nodes, edges).num_nodes(), 30u);
}

TEST(Commands, EvalOnAnUntrainedCheckpoint) {
  const fs::path dir = fresh_dir("untrained");
  json cfg = json::parse(kTinyConfig);
  cfg["train"]["max_epochs"] = 0;
  cfg["train"]["pretrain_epochs"] = 0;
  const fs::path config = write_config(dir, cfg.dump());
  for (const char* method : {"lp", "mlp", "gnn", "glenn", "genn_minus", "genn"}) {
    const fs::path out = dir / method;
    ASSERT_EQ(run("train", config, out, method), kExitOk) << slurp(out / "error.json");
    ASSERT_EQ(run("eval", config, out, method), kExitOk) << slurp(out / "error.json");
    const json m = json::parse(slurp(out / "metrics.json"));
    ASSERT_TRUE(m["macro_pr_auc"].is_number()) << method;
    EXPECT_GE(m["macro_pr_auc"].get<double>(), 0.0);
    EXPECT_LE(m["macro_pr_auc"].get<double>(), 1.0);
    EXPECT_GE(m["macro_roc_auc"].get<double>(), 0.0);
    EXPECT_LE(m["macro_roc_auc"].get<double>(), 1.0);
    EXPECT_EQ(m["roc_auc"].size(), 4u);
    std::ifstream log(out / "epoch_log.csv");
    std::string header;
    std::getline(log, header);
    EXPECT_EQ(header, "epoch,hinge,energy_truth,energy_pred,bce_phi,bce_psi,val_prauc");
  }
}

TEST(Commands, ManifestReruns) {
  const fs::path dir = fresh_dir("manifest");
  const fs::path config = write_config(dir, kTinyConfig);
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(run("train", config, dir / sub), kExitOk);
    ASSERT_EQ(run("eval", config, dir / sub), kExitOk);
  }
  EXPECT_EQ(slurp(dir / "a" / "manifest.json"), slurp(dir / "b" / "manifest.json"));
  EXPECT_EQ(slurp(dir / "a" / "metrics.json"), slurp(dir / "b" / "metrics.json"));
  EXPECT_EQ(slurp(dir / "a" / "checkpoint.json"), slurp(dir / "b" / "checkpoint.json"));
  const json manifest = json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "eval");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["config_hash"], config_hash(parse_run_config(kTinyConfig)));
  EXPECT_TRUE(manifest["versions"].contains("genn"));
}

TEST(Commands, SeedFlagOverridesTheConfig) {
  const fs::path dir = fresh_dir("seed");
  const fs::path config = write_config(dir, kTinyConfig);
  CommandOptions o;
  o.command = "synth";
  o.config = config;
  o.out = dir / "a";
  o.seed = 11;
  std::ostringstream log;
  std::ostringstream err;
  ASSERT_EQ(run_command(o, log, err), kExitOk);
  EXPECT_EQ(json::parse(slurp(dir / "a" / "manifest.json"))["seed"], 11);
}

TEST(Commands, ConfigErrorsExitTwo) {
  const fs::path dir = fresh_dir("config_error");
  const fs::path config = write_config(dir, R"({"method": "gnn", "bogus": true})");
  EXPECT_EQ(run("train", config, dir / "out"), kExitConfig);
  const json e = json::parse(slurp(dir / "out" / "error.json"));
  EXPECT_EQ(e["error"]["code"], "config");
  EXPECT_TRUE(e["error"]["message"].is_string());
  EXPECT_EQ(run("train", dir / "missing.json", dir / "out2"), kExitConfig);
  EXPECT_EQ(run("dance", config, dir / "out3"), kExitConfig);
}

TEST(Commands, RuntimeErrorsExitOne) {
  const fs::path dir = fresh_dir("runtime_error");
  const fs::path config = write_config(dir, kTinyConfig);
  EXPECT_EQ(run("eval", config, dir / "out"), kExitRuntime);
  EXPECT_EQ(json::parse(slurp(dir / "out" / "error.json"))["error"]["code"], "io");
  std::ofstream(dir / "broken.json") << R"({"magic": "nope"})";
  EXPECT_EQ(run("eval", config, dir / "out2", std::nullopt, dir / "broken.json"), kExitRuntime);
  EXPECT_EQ(json::parse(slurp(dir / "out2" / "error.json"))["error"]["code"], "checkpoint");
}

TEST(Commands, ReportFailureCreatesTheDirectory) {
  const fs::path out = fresh_dir("report") / "nested" / "out";
  std::ostringstream err;
  EXPECT_EQ(report_failure(std::runtime_error("boom"), out, err), kExitRuntime);
  const json e = json::parse(slurp(out / "error.json"));
  EXPECT_EQ(e["error"]["code"], "internal");
  EXPECT_EQ(e["error"]["message"], "boom");
  EXPECT_EQ(json::parse(err.str()), e);
  EXPECT_EQ(report_failure(Error(ErrorCode::kConfig, "bad flag"), out, err), kExitConfig);
}

TEST(Commands, RobustnessAndCorrelateWriteCsv) {
  const fs::path dir = fresh_dir("sweeps");
  const fs::path config = write_config(dir, kTinyConfig);
  ASSERT_EQ(run("robustness", config, dir / "out"), kExitOk);
  std::ifstream sweep(dir / "out" / "robustness.csv");
  std::string line;
  std::getline(sweep, line);
  EXPECT_EQ(line, "method,fraction,seed,pr_auc,roc_auc,p1,p5");
  int rows = 0;
  while (std::getline(sweep, line)) ++rows;
  EXPECT_EQ(rows, 4);  // 1 fraction × 2 seeds × 2 methods
  EXPECT_TRUE(fs::exists(dir / "out" / "robustness_summary.csv"));

  ASSERT_EQ(run("correlate", config, dir / "out"), kExitOk);
  std::ifstream corr(dir / "out" / "correlation.csv");
  std::getline(corr, line);
  EXPECT_EQ(line, "type_a,type_b,r_truth,r_model");
  std::getline(corr, line);
  EXPECT_EQ(line.substr(0, 4), "0,1,");
}

TEST(Commands, SelftestPasses) {
  const fs::path dir = fresh_dir("selftest");
  CommandOptions o;
  o.command = "selftest";
  o.out = dir;
  std::ostringstream log;
  std::ostringstream err;
  ASSERT_EQ(run_command(o, log, err), kExitOk) << err.str();
  const json report = json::parse(slurp(dir / "selftest.json"));
  ASSERT_FALSE(report.empty());
  std::size_t checks = 0;
  for (const auto& c : report["checks"]) {
    EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
    ++checks;
  }
  EXPECT_GE(checks, 8u);
}

}  // namespace
}  // namespace genn::cli
