// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/cli/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "genn/common/error.hpp"
#include "genn/common/rng.hpp"

namespace genn::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) {
  fail(ErrorCode::kCheckpoint, "checkpoint: " + message);
}

diff::ParamList tensors_of(eval::TrainedModel& model) {
  return std::visit(
      [](auto& m) -> diff::ParamList {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, eval::LpModel>) {
          return {};
        } else if constexpr (std::is_same_v<T, baselines::MlpModel>) {
          return diff::parameters_of(m, "mlp");
        } else if constexpr (std::is_same_v<T, mpnn::MpnnParams>) {
          return diff::parameters_of(m, "gnn");
        } else {
          diff::ParamList out = energy::parameters(m.theta, "theta");
          for (auto& p : diff::parameters_of(m.pair, "pair")) out.push_back(std::move(p));
          return out;
        }
      },
      model.model);
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad ") + key);
  }
}

}  // namespace

eval::TrainedModel initial_model(eval::Method method, ModelDims dims, const TrainConfig& config,
                                 const baselines::LpConfig& lp) {
  eval::TrainedModel out;
  out.method = method;
  out.config = config;
  Rng rng = make_rng(config.seed, "checkpoint.init");
  const std::size_t d = dims.feature_dim;
  const std::size_t l = dims.num_types;
  switch (method) {
    case eval::Method::kLp:
      out.model = eval::LpModel{lp, config.seed};
      break;
    case eval::Method::kMlp:
      out.model = baselines::MlpModel::glorot(2 * d, config.mlp_hidden, l, rng);
      break;
    case eval::Method::kGnn:
      out.model = mpnn::MpnnParams::glorot(d, l, config.hidden_dim, config.num_layers, rng);
      break;
    case eval::Method::kGlenn:
    case eval::Method::kGennMinus:
    case eval::Method::kGenn: {
      eval::GennModel g;
      if (method == eval::Method::kGlenn) {
        g.theta = energy::LocalEnergyParams::glorot(d, l, rng);
      } else {
        g.theta = energy::EnergyParams::glorot(d, l, config.hidden_dim, config.num_layers,
                                               config.mlp_hidden, rng);
      }
      g.pair = trainer::InferencePair::glorot(d, l, config.hidden_dim, config.num_layers,
                                              config.mlp_hidden, rng);
      out.model = std::move(g);
      break;
    }
  }
  return out;
}

std::string checkpoint_json(const eval::TrainedModel& model, ModelDims dims) {
  eval::TrainedModel copy = model;
  json tensors = json::object();
  for (const auto& p : tensors_of(copy)) {
    const diff::Tensor& t = *p.tensor;
    tensors[p.name] = {{"shape", {t.rows(), t.cols()}},
                       {"data", std::vector<double>(t.data().begin(), t.data().end())}};
  }
  const TrainConfig& c = model.config;
  const auto* lp = std::get_if<eval::LpModel>(&model.model);
  const json j = {
      {"magic", std::string(kCheckpointMagic)},
      {"method", std::string(eval::to_string(model.method))},
      {"feature_dim", dims.feature_dim},
      {"num_types", dims.num_types},
      {"best_epoch", model.best_epoch},
      {"config",
       {{"hidden_dim", c.hidden_dim},
        {"mlp_hidden", c.mlp_hidden},
        {"num_layers", c.num_layers},
        {"aggregation", c.aggregation == Aggregation::kMean ? "mean" : "sum"},
        {"threshold", c.threshold},
        {"seed", c.seed}}},
      {"lp",
       lp ? json{{"gamma", lp->config.gamma},
                 {"max_iter", lp->config.max_iter},
                 {"tol", lp->config.tol},
                 {"max_samples", lp->config.max_samples},
                 {"seed", lp->seed}}
          : json(nullptr)},
      {"tensors", tensors}};
  return j.dump();
}

eval::TrainedModel parse_checkpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("magic") || j["magic"] != kCheckpointMagic) {
    bad("missing magic string GENN1");
  }
  eval::Method method{};
  try {
    method = eval::parse_method(field<std::string>(j, "method"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCheckpoint) throw;
    bad(e.what());
  }
  const ModelDims dims{field<std::size_t>(j, "feature_dim"), field<std::size_t>(j, "num_types")};
  const json cj = field<json>(j, "config");
  TrainConfig config;
  config.hidden_dim = field<std::size_t>(cj, "hidden_dim");
  config.mlp_hidden = field<std::size_t>(cj, "mlp_hidden");
  config.num_layers = field<std::size_t>(cj, "num_layers");
  config.threshold = field<double>(cj, "threshold");
  config.seed = field<std::uint64_t>(cj, "seed");
  const auto agg = field<std::string>(cj, "aggregation");
  if (agg != "sum" && agg != "mean") bad("bad aggregation");
  config.aggregation = agg == "mean" ? Aggregation::kMean : Aggregation::kSum;
  baselines::LpConfig lp;
  std::uint64_t lp_seed = config.seed;
  if (method == eval::Method::kLp) {
    const json lj = field<json>(j, "lp");
    lp.gamma = field<double>(lj, "gamma");
    lp.max_iter = field<int>(lj, "max_iter");
    lp.tol = field<double>(lj, "tol");
    lp.max_samples = field<std::size_t>(lj, "max_samples");
    lp_seed = field<std::uint64_t>(lj, "seed");
  }

  eval::TrainedModel model = initial_model(method, dims, config, lp);
  model.best_epoch = field<int>(j, "best_epoch");
  if (auto* m = std::get_if<eval::LpModel>(&model.model)) m->seed = lp_seed;
  const json tensors = field<json>(j, "tensors");
  if (!tensors.is_object()) bad("tensors must be an object");
  std::set<std::string> seen;
  for (auto& p : tensors_of(model)) {
    if (!tensors.contains(p.name)) bad("missing tensor " + p.name);
    seen.insert(p.name);
    const json& entry = tensors.at(p.name);
    const auto shape = field<std::vector<std::size_t>>(entry, "shape");
    diff::Tensor& t = *p.tensor;
    if (shape.size() != 2 || shape[0] != t.rows() || shape[1] != t.cols()) {
      bad("tensor " + p.name + " has shape " + entry.at("shape").dump() + ", expected " +
          t.shape_string());
    }
    const auto data = field<std::vector<double>>(entry, "data");
    if (data.size() != t.size()) bad("tensor " + p.name + " has the wrong number of values");
    std::copy(data.begin(), data.end(), t.data().begin());
  }
  for (const auto& [name, value] : tensors.items()) {
    if (!seen.contains(name)) bad("unexpected tensor " + name);
  }
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const eval::TrainedModel& model,
                     ModelDims dims) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << checkpoint_json(model, dims) << '\n';
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
}

eval::TrainedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_checkpoint(text.str());
}

}  // namespace genn::cli
