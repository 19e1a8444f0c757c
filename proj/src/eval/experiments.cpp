// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/eval/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "genn/common/error.hpp"
#include "genn/graph/io.hpp"

namespace genn::eval {
namespace {

constexpr double kValFraction = 0.05;

std::string cell(const std::optional<double>& v) {
  return v ? graph::format_double(*v) : std::string("nan");
}

std::optional<double> safe_pearson(const std::vector<long>& x, const std::vector<long>& y) {
  try {
    return pearson(std::span<const long>(x), std::span<const long>(y));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConstantVector) return std::nullopt;
    throw;
  }
}

SweepRow run_one(const graph::Graph& g, double fraction, std::uint64_t seed, Method method,
                 MethodSettings settings) {
  const graph::Task task(g, graph::split_edges(g, robustness_ratios(fraction), seed), seed);
  settings.train.seed = seed;
  const MetricsReport report = evaluate_test(train_method(method, task, settings), task);
  return {method, fraction, seed, report.macro_pr_auc, report.macro_roc_auc, report.p_at_1,
          report.p_at_5};
}

}  // namespace

graph::SplitRatios robustness_ratios(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0 - kValFraction)) {
    fail(ErrorCode::kInvalidArgument, "robustness fraction " + std::to_string(fraction) +
                                          " must lie in (0, 0.95)");
  }
  return {fraction, kValFraction, 1.0 - kValFraction - fraction};
}

std::size_t thread_cap() {
  if (const char* env = std::getenv("GENN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> robustness_sweep(const graph::Graph& graph, std::span<const double> fractions,
                                       std::span<const std::uint64_t> seeds,
                                       std::span<const Method> methods,
                                       const MethodSettings& settings, std::size_t threads) {
  for (double f : fractions) robustness_ratios(f);
  struct Job {
    double fraction;
    std::uint64_t seed;
    Method method;
  };
  std::vector<Job> jobs;
  for (double f : fractions) {
    for (std::uint64_t s : seeds) {
      for (Method m : methods) jobs.push_back({f, s, m});
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        rows[i] = run_one(graph, jobs[i].fraction, jobs[i].seed, jobs[i].method, settings);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs.size(), 1));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<SweepSummary> summarize(std::span<const SweepRow> rows) {
  std::vector<SweepSummary> out;
  std::map<std::pair<int, double>, std::vector<double>> groups;
  std::vector<std::pair<int, double>> order;
  for (const SweepRow& r : rows) {
    const std::pair<int, double> key{static_cast<int>(r.method), r.fraction};
    if (!groups.contains(key)) order.push_back(key);
    if (r.pr_auc) groups[key].push_back(*r.pr_auc);
  }
  for (const auto& key : order) {
    const auto& v = groups[key];
    if (v.empty()) continue;
    SweepSummary s;
    s.method = static_cast<Method>(key.first);
    s.fraction = key.second;
    s.runs = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_pr_auc = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean_pr_auc) * (x - s.mean_pr_auc);
      s.std_pr_auc = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    out.push_back(s);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "method,fraction,seed,pr_auc,roc_auc,p1,p5\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.method) << ',' << graph::format_double(r.fraction) << ',' << r.seed << ','
        << cell(r.pr_auc) << ',' << cell(r.roc_auc) << ',' << cell(r.p1) << ',' << cell(r.p5)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SweepSummary> rows) {
  out << "method,fraction,mean_pr_auc,std_pr_auc,runs\n";
  for (const SweepSummary& s : rows) {
    out << to_string(s.method) << ',' << graph::format_double(s.fraction) << ','
        << graph::format_double(s.mean_pr_auc) << ',' << graph::format_double(s.std_pr_auc) << ','
        << s.runs << '\n';
  }
}

std::vector<CorrelationRow> type_correlations(const graph::Task& task, const Tensor& test_scores,
                                              double threshold,
                                              std::span<const std::pair<int, int>> type_pairs) {
  const graph::LabeledPairs& test = task.test();
  if (test_scores.rows() != test.size() || test_scores.cols() != test.labels.cols()) {
    fail(ErrorCode::kShapeMismatch, "type_correlations: scores " + test_scores.shape_string() +
                                        " vs test labels " + test.labels.shape_string());
  }
  const std::size_t n = test.num_positive;
  const std::size_t types = test.labels.cols();
  const std::span<const NodePair> pairs(test.pairs.data(), n);
  const auto head = [&](const Tensor& t) {
    return Tensor(n, types, std::vector<double>(t.data().begin(), t.data().begin() +
                                                                      static_cast<long>(n * types)));
  };
  const std::size_t nodes = task.graph().num_nodes();
  const TypeDistribution truth = type_distribution(head(test.labels), pairs, nodes);
  const TypeDistribution model =
      type_distribution(binarize(head(test_scores), threshold), pairs, nodes);

  std::vector<std::pair<int, int>> selected(type_pairs.begin(), type_pairs.end());
  if (selected.empty()) {
    for (std::size_t a = 0; a < types; ++a) {
      for (std::size_t b = a + 1; b < types; ++b) {
        selected.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  std::vector<CorrelationRow> rows;
  for (const auto& [a, b] : selected) {
    for (int t : {a, b}) {
      if (t < 0 || static_cast<std::size_t>(t) >= types) {
        fail(ErrorCode::kInvalidArgument, "type " + std::to_string(t) + " out of range");
      }
    }
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    rows.push_back({a, b, safe_pearson(truth.counts[ua], truth.counts[ub]),
                    safe_pearson(model.counts[ua], model.counts[ub])});
  }
  return rows;
}

void write_correlation_csv(std::ostream& out, std::span<const CorrelationRow> rows) {
  out << "type_a,type_b,r_truth,r_model\n";
  for (const CorrelationRow& r : rows) {
    out << r.type_a << ',' << r.type_b << ',' << cell(r.r_truth) << ',' << cell(r.r_model) << '\n';
  }
}

}  // namespace genn::eval
