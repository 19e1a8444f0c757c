// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/cli/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "genn/common/error.hpp"
#include "genn/graph/io.hpp"

namespace genn::cli {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  fail(ErrorCode::kConfig, field + ": " + message);
}

void expect_object(const json& j, const std::string& field,
                   std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) config_error(field, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view k : keys) known = known || k == key;
    if (!known) config_error(field.empty() ? key : field + "." + key, "unknown key");
  }
}

std::string join(const std::string& field, const char* key) {
  return field.empty() ? std::string(key) : field + "." + key;
}

template <class T>
void read(const json& j, const std::string& field, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw std::invalid_argument("number");
      out = v.get<double>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw std::invalid_argument("integer");
      if (std::is_unsigned_v<T> && v.get<long long>() < 0) throw std::invalid_argument("integer");
      out = v.get<T>();
    } else {
      out = v.get<T>();
    }
  } catch (const std::exception&) {
    config_error(join(field, key), "wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

void read_train(const json& j, TrainConfig& c) {
  const std::string f = "train";
  expect_object(j, f,
                {"lr_pretrain", "lr_main", "lambda1", "lambda2", "lambda3", "patience", "threshold",
                 "max_epochs", "pretrain_epochs", "finetune_epochs", "negative_ratio",
                 "aggregation", "hidden_dim", "mlp_hidden", "num_layers", "clip_norm"});
  read(j, f, "lr_pretrain", c.lr_pretrain);
  read(j, f, "lr_main", c.lr_main);
  read(j, f, "lambda1", c.lambda1);
  read(j, f, "lambda2", c.lambda2);
  read(j, f, "lambda3", c.lambda3);
  read(j, f, "patience", c.patience);
  read(j, f, "threshold", c.threshold);
  read(j, f, "max_epochs", c.max_epochs);
  read(j, f, "pretrain_epochs", c.pretrain_epochs);
  read(j, f, "finetune_epochs", c.finetune_epochs);
  read(j, f, "negative_ratio", c.negative_ratio);
  read(j, f, "hidden_dim", c.hidden_dim);
  read(j, f, "mlp_hidden", c.mlp_hidden);
  read(j, f, "num_layers", c.num_layers);
  read(j, f, "clip_norm", c.clip_norm);
  if (j.contains("aggregation")) {
    std::string agg;
    read(j, f, "aggregation", agg);
    if (agg == "sum") {
      c.aggregation = Aggregation::kSum;
    } else if (agg == "mean") {
      c.aggregation = Aggregation::kMean;
    } else {
      config_error("train.aggregation", "expected sum or mean");
    }
  }
}

void read_synthetic(const json& j, graph::SyntheticSpec& s) {
  const std::string f = "data.synthetic";
  expect_object(j, f,
                {"num_nodes", "num_types", "edge_prob", "seed", "label_mode", "num_communities",
                 "community_offset", "base_rate", "favored_boost", "corr_pairs"});
  read(j, f, "num_nodes", s.num_nodes);
  read(j, f, "num_types", s.num_types);
  read(j, f, "edge_prob", s.edge_prob);
  read(j, f, "seed", s.seed);
  read(j, f, "num_communities", s.num_communities);
  read(j, f, "community_offset", s.community_offset);
  read(j, f, "base_rate", s.base_rate);
  read(j, f, "favored_boost", s.favored_boost);
  if (j.contains("label_mode")) {
    std::string mode;
    read(j, f, "label_mode", mode);
    if (mode == "independent") {
      s.label_mode = graph::LabelMode::kIndependent;
    } else if (mode == "single") {
      s.label_mode = graph::LabelMode::kSingle;
    } else {
      config_error(f + ".label_mode", "expected independent or single");
    }
  }
  if (j.contains("corr_pairs")) {
    const json& list = j.at("corr_pairs");
    if (!list.is_array()) config_error(f + ".corr_pairs", "expected a list");
    s.corr_pairs.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string item = f + ".corr_pairs[" + std::to_string(i) + "]";
      expect_object(list[i], item, {"cause", "effect", "prob"});
      graph::CorrelatedPair p;
      read(list[i], item, "cause", p.cause);
      read(list[i], item, "effect", p.effect);
      read(list[i], item, "prob", p.prob);
      s.corr_pairs.push_back(p);
    }
  }
}

std::vector<eval::Method> read_methods(const json& j, const std::string& field) {
  if (!j.is_array()) config_error(field, "expected a list of method ids");
  std::vector<eval::Method> out;
  for (const json& m : j) {
    if (!m.is_string()) config_error(field, "expected a list of method ids");
    out.push_back(eval::parse_method(m.get<std::string>()));
  }
  return out;
}

json synthetic_json(const graph::SyntheticSpec& s) {
  json pairs = json::array();
  for (const auto& p : s.corr_pairs) {
    pairs.push_back({{"cause", p.cause}, {"effect", p.effect}, {"prob", p.prob}});
  }
  return {{"num_nodes", s.num_nodes},
          {"num_types", s.num_types},
          {"edge_prob", s.edge_prob},
          {"seed", s.seed},
          {"label_mode", s.label_mode == graph::LabelMode::kSingle ? "single" : "independent"},
          {"num_communities", s.num_communities},
          {"community_offset", s.community_offset},
          {"base_rate", s.base_rate},
          {"favored_boost", s.favored_boost},
          {"corr_pairs", pairs}};
}

json train_json(const TrainConfig& c) {
  return {{"lr_pretrain", c.lr_pretrain},
          {"lr_main", c.lr_main},
          {"lambda1", c.lambda1},
          {"lambda2", c.lambda2},
          {"lambda3", c.lambda3},
          {"patience", c.patience},
          {"threshold", c.threshold},
          {"max_epochs", c.max_epochs},
          {"pretrain_epochs", c.pretrain_epochs},
          {"finetune_epochs", c.finetune_epochs},
          {"negative_ratio", c.negative_ratio},
          {"aggregation", c.aggregation == Aggregation::kMean ? "mean" : "sum"},
          {"hidden_dim", c.hidden_dim},
          {"mlp_hidden", c.mlp_hidden},
          {"num_layers", c.num_layers},
          {"clip_norm", c.clip_norm}};
}

}  // namespace

void RunConfig::validate() const {
  if (synthetic.has_value() == files.has_value()) {
    config_error("data", "exactly one of synthetic or files is required");
  }
  if (seeds.empty()) config_error("seeds", "must not be empty");
  const double sum = split.train + split.val + split.test;
  for (double r : {split.train, split.val, split.test}) {
    if (!(r > 0.0 && r < 1.0)) config_error("split", "each ratio must lie in (0, 1)");
  }
  if (std::abs(sum - 1.0) > 1e-9) config_error("split", "ratios must sum to 1");
  settings.train.validate();
  settings.lp.validate();
  for (double f : fractions) {
    if (!(f > 0.0 && f < 0.95)) config_error("robustness.fractions", "each must lie in (0, 0.95)");
  }
  if (sweep_methods.empty()) config_error("robustness.methods", "must not be empty");
  if (!(correlation_threshold > 0.0 && correlation_threshold < 1.0)) {
    config_error("correlation.threshold", "must lie in (0, 1)");
  }
  if (synthetic) {
    const std::size_t types = synthetic->num_types;
    for (const auto& [a, b] : correlation_pairs) {
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= types ||
          static_cast<std::size_t>(b) >= types || a == b) {
        config_error("correlation.pairs", "type pair out of range");
      }
    }
  }
}

void RunConfig::override_seed(std::uint64_t value) {
  if (seeds.size() == 1 && seeds.front() == seed) seeds = {value};
  seed = value;
  settings.train.seed = value;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  expect_object(j, "", {"method", "seed", "seeds", "data", "split", "train", "lp", "robustness",
                        "correlation"});
  RunConfig c;
  if (j.contains("method")) {
    std::string m;
    read(j, "", "method", m);
    c.method = eval::parse_method(m);
  }
  read(j, "", "seed", c.seed);
  if (j.contains("seeds")) {
    read(j, "", "seeds", c.seeds);
  } else {
    c.seeds = {c.seed};
  }
  if (!j.contains("data")) config_error("data", "required");
  const json& data = j.at("data");
  expect_object(data, "data", {"synthetic", "files"});
  if (data.contains("synthetic")) {
    graph::SyntheticSpec s;
    read_synthetic(data.at("synthetic"), s);
    c.synthetic = s;
  }
  if (data.contains("files")) {
    const json& fj = data.at("files");
    expect_object(fj, "data.files", {"nodes", "edges", "split", "projection_dim"});
    if (!fj.contains("nodes") || !fj.contains("edges")) {
      config_error("data.files", "nodes and edges are required");
    }
    FileSource src;
    std::string p;
    read(fj, "data.files", "nodes", p);
    src.nodes = resolve(base_dir, p);
    read(fj, "data.files", "edges", p);
    src.edges = resolve(base_dir, p);
    if (fj.contains("split")) {
      read(fj, "data.files", "split", p);
      src.split = resolve(base_dir, p);
    }
    read(fj, "data.files", "projection_dim", src.projection_dim);
    c.files = src;
  }
  if (j.contains("split")) {
    expect_object(j.at("split"), "split", {"train", "val", "test"});
    read(j.at("split"), "split", "train", c.split.train);
    read(j.at("split"), "split", "val", c.split.val);
    read(j.at("split"), "split", "test", c.split.test);
  }
  if (j.contains("train")) read_train(j.at("train"), c.settings.train);
  c.settings.train.seed = c.seed;
  if (j.contains("lp")) {
    const json& lp = j.at("lp");
    expect_object(lp, "lp", {"gamma", "max_iter", "tol", "max_samples"});
    read(lp, "lp", "gamma", c.settings.lp.gamma);
    read(lp, "lp", "max_iter", c.settings.lp.max_iter);
    read(lp, "lp", "tol", c.settings.lp.tol);
    read(lp, "lp", "max_samples", c.settings.lp.max_samples);
  }
  if (j.contains("robustness")) {
    const json& r = j.at("robustness");
    expect_object(r, "robustness", {"fractions", "methods"});
    read(r, "robustness", "fractions", c.fractions);
    if (r.contains("methods")) c.sweep_methods = read_methods(r.at("methods"), "robustness.methods");
  }
  if (j.contains("correlation")) {
    const json& r = j.at("correlation");
    expect_object(r, "correlation", {"pairs", "threshold"});
    read(r, "correlation", "pairs", c.correlation_pairs);
    read(r, "correlation", "threshold", c.correlation_threshold);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfig, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

std::string canonical_json(const RunConfig& c) {
  json data;
  if (c.synthetic) data["synthetic"] = synthetic_json(*c.synthetic);
  if (c.files) {
    json f = {{"nodes", c.files->nodes.string()},
              {"edges", c.files->edges.string()},
              {"projection_dim", c.files->projection_dim}};
    if (c.files->split) f["split"] = c.files->split->string();
    data["files"] = f;
  }
  json sweep = json::array();
  for (eval::Method m : c.sweep_methods) sweep.push_back(std::string(eval::to_string(m)));
  const json j = {
      {"method", std::string(eval::to_string(c.method))},
      {"seed", c.seed},
      {"seeds", c.seeds},
      {"data", data},
      {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
      {"train", train_json(c.settings.train)},
      {"lp",
       {{"gamma", c.settings.lp.gamma},
        {"max_iter", c.settings.lp.max_iter},
        {"tol", c.settings.lp.tol},
        {"max_samples", c.settings.lp.max_samples}}},
      {"robustness", {{"fractions", c.fractions}, {"methods", sweep}}},
      {"correlation", {{"pairs", c.correlation_pairs}, {"threshold", c.correlation_threshold}}}};
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

graph::Graph load_data(const RunConfig& config) {
  if (config.synthetic) return graph::generate_synthetic(*config.synthetic);
  const FileSource& src = config.files.value();
  graph::Graph g = graph::load_graph(src.nodes, src.edges);
  if (src.projection_dim == 0) return g;
  return graph::Graph(graph::random_projection(g.num_nodes(), src.projection_dim, config.seed),
                      g.num_types(), g.edges());
}

graph::EdgeSplit make_split(const RunConfig& config, const graph::Graph& graph) {
  if (config.files && config.files->split) {
    return graph::load_split(*config.files->split, graph.num_edges());
  }
  return graph::split_edges(graph, config.split, config.seed);
}

}  // namespace genn::cli
