// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/graph/task.hpp"

#include <random>
#include <string>

#include "genn/common/error.hpp"

namespace genn::graph {
namespace {

NodePair draw_free_pair(std::size_t num_nodes, const std::unordered_set<std::uint64_t>& taken,
                        Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(num_nodes) - 1);
  while (true) {
    const int a = pick(rng);
    const int b = pick(rng);
    if (a == b) continue;
    const NodePair p = NodePair{a, b}.canonical();
    if (!taken.contains(p.key())) return p;
  }
}

void ensure_capacity(std::size_t num_nodes, std::size_t taken, std::size_t wanted) {
  const std::size_t all = num_nodes * (num_nodes - 1) / 2;
  if (taken + wanted > all) {
    fail(ErrorCode::kDegenerateGraph,
         "cannot sample " + std::to_string(wanted) + " non-edges: only " +
             std::to_string(all - std::min(all, taken)) + " free node pairs");
  }
}

LabeledPairs evaluation_set(const Graph& graph, const std::vector<std::size_t>& positives,
                            std::unordered_set<std::uint64_t>& reserved, Rng& rng) {
  LabeledPairs out;
  out.pairs = graph.pairs(positives);
  out.num_positive = positives.size();
  ensure_capacity(graph.num_nodes(), reserved.size(), positives.size());
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const NodePair p = draw_free_pair(graph.num_nodes(), reserved, rng);
    reserved.insert(p.key());
    out.pairs.push_back(p);
  }
  out.labels = Tensor(out.pairs.size(), graph.num_types());
  const Tensor pos = graph.label_matrix(positives);
  std::copy(pos.data().begin(), pos.data().end(), out.labels.data().begin());
  return out;
}

}  // namespace

Task::Task(Graph graph, EdgeSplit split, std::uint64_t seed)
    : graph_(std::move(graph)), split_(std::move(split)), seed_(seed) {
  validate_split(split_, graph_.num_edges());
  for (const Edge& e : graph_.edges()) reserved_.insert(e.pair().key());
  train_.pairs = graph_.pairs(split_.train);
  train_.labels = graph_.label_matrix(split_.train);
  train_.num_positive = split_.train.size();
  for (const NodePair& p : train_.pairs) train_keys_.insert(p.key());

  Rng val_rng = make_rng(seed_, "task.val_negatives");
  val_ = evaluation_set(graph_, split_.val, reserved_, val_rng);
  Rng test_rng = make_rng(seed_, "task.test_negatives");
  test_ = evaluation_set(graph_, split_.test, reserved_, test_rng);
}

std::vector<NodePair> Task::sample_negatives(std::size_t count, Rng& rng) const {
  ensure_capacity(graph_.num_nodes(), reserved_.size(), count);
  std::unordered_set<std::uint64_t> drawn;
  std::vector<NodePair> out;
  out.reserve(count);
  while (out.size() < count) {
    const NodePair p = draw_free_pair(graph_.num_nodes(), reserved_, rng);
    if (drawn.insert(p.key()).second) out.push_back(p);
  }
  return out;
}

LabeledPairs Task::with_negatives(const std::vector<NodePair>& negatives) const {
  LabeledPairs out;
  out.pairs = train_.pairs;
  out.pairs.insert(out.pairs.end(), negatives.begin(), negatives.end());
  out.num_positive = train_.num_positive;
  out.labels = Tensor(out.pairs.size(), graph_.num_types());
  std::copy(train_.labels.data().begin(), train_.labels.data().end(), out.labels.data().begin());
  return out;
}

bool Task::is_train_edge(NodePair p) const { return train_keys_.contains(p.key()); }

}  // namespace genn::graph
