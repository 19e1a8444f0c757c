// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>

#include "genn/cli/commands.hpp"
#include "genn/common/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-based multi-type link prediction"};
  app.set_version_flag("--version", genn::cli::kVersion);
  app.require_subcommand(1);

  genn::cli::CommandOptions options;
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::string method;
  std::string checkpoint;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run config");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed, overrides the config");
    sub->add_option("--method", method, "lp, mlp, gnn, glenn, genn_minus or genn");
    sub->add_option("--checkpoint", checkpoint, "checkpoint to evaluate");
    return sub;
  };
  add("train", "train a method; writes checkpoint.json and epoch_log.csv");
  add("eval", "evaluate a checkpoint on the test split; writes metrics.json");
  add("synth", "generate a synthetic graph; writes nodes.csv, edges.csv and split.csv");
  add("robustness", "train-fraction sweep; writes robustness.csv");
  add("correlate", "type-distribution correlations; writes correlation.csv");
  add("selftest", "gradient checks and metric oracles; writes selftest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e) == 0) return 0;
    return genn::cli::report_failure(genn::Error(genn::ErrorCode::kConfig, e.what()), out,
                                     std::cerr);
  }

  const CLI::App* sub = app.get_subcommands().front();
  options.command = sub->get_name();
  options.out = out;
  if (sub->count("--config") > 0) options.config = config;
  if (sub->count("--seed") > 0) options.seed = seed;
  if (sub->count("--method") > 0) options.method = method;
  if (sub->count("--checkpoint") > 0) options.checkpoint = checkpoint;
  return genn::cli::run_command(options, std::cout, std::cerr);
}
