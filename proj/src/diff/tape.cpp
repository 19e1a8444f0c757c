// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/diff/tape.hpp"

#include <Eigen/Core>
#include <cmath>

#include "genn/common/error.hpp"

namespace genn::diff {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Map = Eigen::Map<RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.data().data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}
Map as_matrix(Tensor& t) {
  return Map(t.data().data(), static_cast<Eigen::Index>(t.rows()),
             static_cast<Eigen::Index>(t.cols()));
}

[[noreturn]] void shape_error(OpKind kind, const Tensor& a, const Tensor& b) {
  fail(ErrorCode::kShapeMismatch, std::string("shape mismatch in ") +
                                      std::string(to_string(kind)) + ": " + a.shape_string() +
                                      " vs " + b.shape_string());
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ReLU subgradient at 0 is 0; likewise sign(0) = 0 for L1.
double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string_view to_string(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kMatMulBT: return "matmul_bt";
    case OpKind::kAdd: return "add";
    case OpKind::kAddBias: return "add_bias";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kRelu: return "relu";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kMean: return "mean";
    case OpKind::kSum: return "sum";
    case OpKind::kMeanRows: return "mean_rows";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kGatherRows: return "gather_rows";
    case OpKind::kEdgeMessage: return "edge_message";
    case OpKind::kIncidenceSum: return "incidence_sum";
    case OpKind::kBatchNorm: return "batch_norm";
    case OpKind::kL1Distance: return "l1_distance";
    case OpKind::kBceWithLogits: return "bce_with_logits";
  }
  return "unknown";
}

void Tape::check_id(NodeId id) const {
  if (id >= nodes_.size()) {
    fail(ErrorCode::kInvalidArgument, "tape node id " + std::to_string(id) + " out of range");
  }
}

NodeId Tape::push(OpKind kind, std::vector<NodeId> inputs, Tensor value, Aux aux) {
  if (!value.all_finite()) {
    fail(ErrorCode::kNonFinite,
         std::string("non-finite value produced by ") + std::string(to_string(kind)));
  }
  nodes_.push_back(Node{kind, std::move(inputs), std::move(value), std::move(aux)});
  return nodes_.size() - 1;
}

NodeId Tape::constant(Tensor value) { return push(OpKind::kLeaf, {}, std::move(value)); }
NodeId Tape::variable(Tensor value) { return push(OpKind::kLeaf, {}, std::move(value)); }

NodeId Tape::apply(OpKind kind, std::span<const NodeId> inputs) {
  auto arity = [&](std::size_t n) {
    if (inputs.size() != n) {
      fail(ErrorCode::kInvalidArgument, std::string(to_string(kind)) + " expects " +
                                            std::to_string(n) + " inputs, got " +
                                            std::to_string(inputs.size()));
    }
  };
  switch (kind) {
    case OpKind::kMatMul: arity(2); return matmul(inputs[0], inputs[1]);
    case OpKind::kMatMulBT: arity(2); return matmul_bt(inputs[0], inputs[1]);
    case OpKind::kAdd: arity(2); return add(inputs[0], inputs[1]);
    case OpKind::kAddBias: arity(2); return add_bias(inputs[0], inputs[1]);
    case OpKind::kSub: arity(2); return sub(inputs[0], inputs[1]);
    case OpKind::kMul: arity(2); return mul(inputs[0], inputs[1]);
    case OpKind::kRelu: arity(1); return relu(inputs[0]);
    case OpKind::kSigmoid: arity(1); return sigmoid(inputs[0]);
    case OpKind::kMean: arity(1); return mean(inputs[0]);
    case OpKind::kSum: arity(1); return sum(inputs[0]);
    case OpKind::kMeanRows: arity(1); return mean_rows(inputs[0]);
    case OpKind::kConcatCols: arity(2); return concat_cols(inputs[0], inputs[1]);
    case OpKind::kConcatRows: arity(2); return concat_rows(inputs[0], inputs[1]);
    case OpKind::kL1Distance: arity(2); return l1_distance(inputs[0], inputs[1]);
    case OpKind::kBceWithLogits: arity(2); return bce_with_logits(inputs[0], inputs[1]);
    case OpKind::kBatchNorm: arity(3); return batch_norm_train(inputs[0], inputs[1], inputs[2]);
    default:
      fail(ErrorCode::kInvalidArgument,
           std::string(to_string(kind)) + " needs attributes; use its dedicated method");
  }
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.cols() != y.rows()) shape_error(OpKind::kMatMul, x, y);
  Tensor out(x.rows(), y.cols());
  as_matrix(out).noalias() = as_matrix(x) * as_matrix(y);
  return push(OpKind::kMatMul, {a, b}, std::move(out));
}

NodeId Tape::matmul_bt(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.cols() != y.cols()) shape_error(OpKind::kMatMulBT, x, y);
  Tensor out(x.rows(), y.rows());
  as_matrix(out).noalias() = as_matrix(x) * as_matrix(y).transpose();
  return push(OpKind::kMatMulBT, {a, b}, std::move(out));
}

NodeId Tape::add(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  if (!value(a).same_shape(value(b))) shape_error(OpKind::kAdd, value(a), value(b));
  Tensor out = value(a);
  out += value(b);
  return push(OpKind::kAdd, {a, b}, std::move(out));
}

NodeId Tape::add_bias(NodeId a, NodeId bias) {
  check_id(a);
  check_id(bias);
  const Tensor& x = value(a);
  const Tensor& b = value(bias);
  if (b.rows() != 1 || b.cols() != x.cols()) shape_error(OpKind::kAddBias, x, b);
  Tensor out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < out.cols(); ++c) row[c] += b[c];
  }
  return push(OpKind::kAddBias, {a, bias}, std::move(out));
}

NodeId Tape::sub(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error(OpKind::kSub, x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  return push(OpKind::kSub, {a, b}, std::move(out));
}

NodeId Tape::mul(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error(OpKind::kMul, x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= y[i];
  return push(OpKind::kMul, {a, b}, std::move(out));
}

NodeId Tape::scale(NodeId a, double factor) {
  check_id(a);
  Tensor out = value(a);
  for (double& v : out.data()) v *= factor;
  return push(OpKind::kScale, {a}, std::move(out), factor);
}

NodeId Tape::relu(NodeId a) {
  check_id(a);
  Tensor out = value(a);
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return push(OpKind::kRelu, {a}, std::move(out));
}

NodeId Tape::sigmoid(NodeId a) {
  check_id(a);
  Tensor out = value(a);
  for (double& v : out.data()) v = stable_sigmoid(v);
  return push(OpKind::kSigmoid, {a}, std::move(out));
}

NodeId Tape::mean(NodeId a) {
  check_id(a);
  const Tensor& x = value(a);
  if (x.empty()) fail(ErrorCode::kShapeMismatch, "mean of empty tensor");
  double total = 0.0;
  for (double v : x.data()) total += v;
  return push(OpKind::kMean, {a}, Tensor::scalar(total / static_cast<double>(x.size())));
}

NodeId Tape::sum(NodeId a) {
  check_id(a);
  double total = 0.0;
  for (double v : value(a).data()) total += v;
  return push(OpKind::kSum, {a}, Tensor::scalar(total));
}

NodeId Tape::mean_rows(NodeId a) {
  check_id(a);
  const Tensor& x = value(a);
  if (x.rows() == 0) fail(ErrorCode::kShapeMismatch, "mean_rows of tensor with no rows");
  Tensor out(1, x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) out[c] += x(r, c);
  }
  for (double& v : out.data()) v /= static_cast<double>(x.rows());
  return push(OpKind::kMeanRows, {a}, std::move(out));
}

NodeId Tape::concat_cols(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.rows() != y.rows()) shape_error(OpKind::kConcatCols, x, y);
  Tensor out(x.rows(), x.cols() + y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(x.row(r).begin(), x.row(r).end(), dst.begin());
    std::copy(y.row(r).begin(), y.row(r).end(), dst.begin() + static_cast<long>(x.cols()));
  }
  return push(OpKind::kConcatCols, {a, b}, std::move(out));
}

NodeId Tape::concat_rows(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.cols() != y.cols()) shape_error(OpKind::kConcatRows, x, y);
  std::vector<double> data(x.data().begin(), x.data().end());
  data.insert(data.end(), y.data().begin(), y.data().end());
  return push(OpKind::kConcatRows, {a, b}, Tensor(x.rows() + y.rows(), x.cols(), std::move(data)));
}

NodeId Tape::gather_rows(NodeId a, std::vector<std::size_t> index) {
  check_id(a);
  const Tensor& x = value(a);
  Tensor out(index.size(), x.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= x.rows()) {
      fail(ErrorCode::kInvalidArgument, "gather_rows index " + std::to_string(index[k]) +
                                            " out of range for " + x.shape_string());
    }
    std::copy(x.row(index[k]).begin(), x.row(index[k]).end(), out.row(k).begin());
  }
  return push(OpKind::kGatherRows, {a}, std::move(out), GatherAux{std::move(index)});
}

NodeId Tape::edge_message(NodeId transforms, NodeId states,
                          std::shared_ptr<const EdgeIndex> edges) {
  check_id(transforms);
  check_id(states);
  const Tensor& f = value(transforms);
  const Tensor& h = value(states);
  const std::size_t m = h.cols();
  if (h.rows() != edges->num_nodes || f.rows() != edges->pairs.size() || f.cols() != m * m) {
    shape_error(OpKind::kEdgeMessage, f, h);
  }
  Tensor out(h.rows(), m);
  for (std::size_t e = 0; e < edges->pairs.size(); ++e) {
    const auto [u, v] = edges->pairs[e];
    const double wu = edges->node_weight[static_cast<std::size_t>(u)];
    const double wv = edges->node_weight[static_cast<std::size_t>(v)];
    const double* fe = f.row(e).data();
    const auto hu = h.row(static_cast<std::size_t>(u));
    const auto hv = h.row(static_cast<std::size_t>(v));
    auto ou = out.row(static_cast<std::size_t>(u));
    auto ov = out.row(static_cast<std::size_t>(v));
    for (std::size_t a = 0; a < m; ++a) {
      double to_u = 0.0;
      double to_v = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        to_u += fe[a * m + b] * hv[b];
        to_v += fe[a * m + b] * hu[b];
      }
      ou[a] += wu * to_u;
      ov[a] += wv * to_v;
    }
  }
  return push(OpKind::kEdgeMessage, {transforms, states}, std::move(out),
              GraphAux{std::move(edges)});
}

NodeId Tape::incidence_sum(NodeId values, std::shared_ptr<const EdgeIndex> edges) {
  check_id(values);
  const Tensor& x = value(values);
  if (x.rows() != edges->pairs.size()) {
    fail(ErrorCode::kShapeMismatch, "shape mismatch in incidence_sum: " + x.shape_string() +
                                        " rows vs " + std::to_string(edges->pairs.size()) +
                                        " edges");
  }
  Tensor out(edges->num_nodes, x.cols());
  for (std::size_t e = 0; e < edges->pairs.size(); ++e) {
    const auto [u, v] = edges->pairs[e];
    auto ou = out.row(static_cast<std::size_t>(u));
    auto ov = out.row(static_cast<std::size_t>(v));
    const auto xe = x.row(e);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      ou[c] += xe[c];
      ov[c] += xe[c];
    }
  }
  return push(OpKind::kIncidenceSum, {values}, std::move(out), GraphAux{std::move(edges)});
}

NodeId Tape::batch_norm_impl(NodeId x_id, NodeId gamma_id, NodeId beta_id,
                             const BatchNormStats* running) {
  check_id(x_id);
  check_id(gamma_id);
  check_id(beta_id);
  const Tensor& x = value(x_id);
  const Tensor& gamma = value(gamma_id);
  const Tensor& beta = value(beta_id);
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != cols) shape_error(OpKind::kBatchNorm, x, gamma);
  if (!gamma.same_shape(beta)) shape_error(OpKind::kBatchNorm, gamma, beta);

  BatchNormAux aux;
  aux.training = running == nullptr;
  if (running != nullptr) {
    if (running->mean.size() != cols || running->var.size() != cols) {
      fail(ErrorCode::kShapeMismatch, "batch_norm running statistics do not match " +
                                          x.shape_string());
    }
    aux.stats = *running;
  } else {
    if (rows == 0) fail(ErrorCode::kShapeMismatch, "batch_norm on empty batch");
    aux.stats.mean.assign(cols, 0.0);
    aux.stats.var.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) aux.stats.mean[c] += x(r, c);
    }
    for (double& m : aux.stats.mean) m /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double d = x(r, c) - aux.stats.mean[c];
        aux.stats.var[c] += d * d;
      }
    }
    for (double& v : aux.stats.var) v /= static_cast<double>(rows);
  }
  aux.inv_std.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    aux.inv_std[c] = 1.0 / std::sqrt(aux.stats.var[c] + kBatchNormEps);
  }
  aux.normalized = Tensor(rows, cols);
  Tensor out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double n = (x(r, c) - aux.stats.mean[c]) * aux.inv_std[c];
      aux.normalized(r, c) = n;
      out(r, c) = gamma[c] * n + beta[c];
    }
  }
  return push(OpKind::kBatchNorm, {x_id, gamma_id, beta_id}, std::move(out), std::move(aux));
}

NodeId Tape::batch_norm_train(NodeId x, NodeId gamma, NodeId beta) {
  return batch_norm_impl(x, gamma, beta, nullptr);
}

NodeId Tape::batch_norm_infer(NodeId x, NodeId gamma, NodeId beta,
                              const BatchNormStats& running) {
  return batch_norm_impl(x, gamma, beta, &running);
}

const BatchNormStats& Tape::batch_stats(NodeId bn_node) const {
  check_id(bn_node);
  const auto* aux = std::get_if<BatchNormAux>(&nodes_[bn_node].aux);
  if (aux == nullptr) fail(ErrorCode::kInvalidArgument, "batch_stats on a non batch_norm node");
  return aux->stats;
}

NodeId Tape::l1_distance(NodeId a, NodeId b) {
  check_id(a);
  check_id(b);
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error(OpKind::kL1Distance, x, y);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += std::abs(x[i] - y[i]);
  return push(OpKind::kL1Distance, {a, b}, Tensor::scalar(total));
}

NodeId Tape::bce_with_logits(NodeId logits, NodeId targets) {
  check_id(logits);
  check_id(targets);
  const Tensor& z = value(logits);
  const Tensor& t = value(targets);
  if (!z.same_shape(t)) shape_error(OpKind::kBceWithLogits, z, t);
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    total += std::max(z[i], 0.0) - z[i] * t[i] + std::log1p(std::exp(-std::abs(z[i])));
  }
  return push(OpKind::kBceWithLogits, {logits, targets}, Tensor::scalar(total));
}

Gradients Tape::backward(NodeId loss) const {
  check_id(loss);
  const Tensor& l = value(loss);
  if (l.rows() != 1 || l.cols() != 1) {
    fail(ErrorCode::kNonScalarLoss, "backward requires a 1x1 loss, got " + l.shape_string());
  }
  std::vector<Tensor> grads;
  grads.reserve(nodes_.size());
  for (const Node& n : nodes_) grads.emplace_back(n.value.rows(), n.value.cols());

  // Only ancestors of the loss receive gradient.
  std::vector<char> reachable(nodes_.size(), 0);
  reachable[loss] = 1;
  for (NodeId id = loss + 1; id-- > 0;) {
    if (!reachable[id]) continue;
    for (NodeId in : nodes_[id].inputs) reachable[in] = 1;
  }

  grads[loss][0] = 1.0;
  for (NodeId id = loss + 1; id-- > 0;) {
    if (reachable[id] && nodes_[id].kind != OpKind::kLeaf) backprop_node(id, grads);
  }
  return Gradients(std::move(grads));
}

void Tape::backprop_node(NodeId id, std::vector<Tensor>& grads) const {
  const Node& node = nodes_[id];
  const Tensor& g = grads[id];
  const auto& in = node.inputs;

  switch (node.kind) {
    case OpKind::kLeaf:
      break;
    case OpKind::kMatMul: {
      as_matrix(grads[in[0]]).noalias() += as_matrix(g) * as_matrix(value(in[1])).transpose();
      as_matrix(grads[in[1]]).noalias() += as_matrix(value(in[0])).transpose() * as_matrix(g);
      break;
    }
    case OpKind::kMatMulBT: {
      as_matrix(grads[in[0]]).noalias() += as_matrix(g) * as_matrix(value(in[1]));
      as_matrix(grads[in[1]]).noalias() += as_matrix(g).transpose() * as_matrix(value(in[0]));
      break;
    }
    case OpKind::kAdd:
      grads[in[0]] += g;
      grads[in[1]] += g;
      break;
    case OpKind::kAddBias: {
      grads[in[0]] += g;
      Tensor& gb = grads[in[1]];
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) gb[c] += g(r, c);
      }
      break;
    }
    case OpKind::kSub: {
      grads[in[0]] += g;
      Tensor& gb = grads[in[1]];
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
      break;
    }
    case OpKind::kMul: {
      const Tensor& a = value(in[0]);
      const Tensor& b = value(in[1]);
      Tensor& ga = grads[in[0]];
      Tensor& gb = grads[in[1]];
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * b[i];
        gb[i] += g[i] * a[i];
      }
      break;
    }
    case OpKind::kScale: {
      const double k = std::get<double>(node.aux);
      Tensor& ga = grads[in[0]];
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += k * g[i];
      break;
    }
    case OpKind::kRelu: {
      const Tensor& a = value(in[0]);
      Tensor& ga = grads[in[0]];
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (a[i] > 0.0) ga[i] += g[i];
      }
      break;
    }
    case OpKind::kSigmoid: {
      const Tensor& y = node.value;
      Tensor& ga = grads[in[0]];
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
      break;
    }
    case OpKind::kMean: {
      Tensor& ga = grads[in[0]];
      const double share = g[0] / static_cast<double>(ga.size());
      for (double& v : ga.data()) v += share;
      break;
    }
    case OpKind::kSum: {
      Tensor& ga = grads[in[0]];
      for (double& v : ga.data()) v += g[0];
      break;
    }
    case OpKind::kMeanRows: {
      Tensor& ga = grads[in[0]];
      const double inv = 1.0 / static_cast<double>(ga.rows());
      for (std::size_t r = 0; r < ga.rows(); ++r) {
        for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += g[c] * inv;
      }
      break;
    }
    case OpKind::kConcatCols: {
      Tensor& ga = grads[in[0]];
      Tensor& gb = grads[in[1]];
      const std::size_t split = ga.cols();
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
          if (c < split) {
            ga(r, c) += g(r, c);
          } else {
            gb(r, c - split) += g(r, c);
          }
        }
      }
      break;
    }
    case OpKind::kConcatRows: {
      Tensor& ga = grads[in[0]];
      Tensor& gb = grads[in[1]];
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i];
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[ga.size() + i];
      break;
    }
    case OpKind::kGatherRows: {
      const auto& index = std::get<GatherAux>(node.aux).index;
      Tensor& ga = grads[in[0]];
      for (std::size_t k = 0; k < index.size(); ++k) {
        auto dst = ga.row(index[k]);
        const auto src = g.row(k);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
      }
      break;
    }
    case OpKind::kEdgeMessage: {
      const EdgeIndex& edges = *std::get<GraphAux>(node.aux).edges;
      const Tensor& f = value(in[0]);
      const Tensor& h = value(in[1]);
      Tensor& gf = grads[in[0]];
      Tensor& gh = grads[in[1]];
      const std::size_t m = h.cols();
      for (std::size_t e = 0; e < edges.pairs.size(); ++e) {
        const auto u = static_cast<std::size_t>(edges.pairs[e].u);
        const auto v = static_cast<std::size_t>(edges.pairs[e].v);
        const double wu = edges.node_weight[u];
        const double wv = edges.node_weight[v];
        const double* fe = f.row(e).data();
        double* gfe = gf.row(e).data();
        const auto hu = h.row(u);
        const auto hv = h.row(v);
        const auto gu = g.row(u);
        const auto gv = g.row(v);
        auto ghu = gh.row(u);
        auto ghv = gh.row(v);
        for (std::size_t a = 0; a < m; ++a) {
          const double du = wu * gu[a];
          const double dv = wv * gv[a];
          for (std::size_t b = 0; b < m; ++b) {
            gfe[a * m + b] += du * hv[b] + dv * hu[b];
            ghv[b] += fe[a * m + b] * du;
            ghu[b] += fe[a * m + b] * dv;
          }
        }
      }
      break;
    }
    case OpKind::kIncidenceSum: {
      const EdgeIndex& edges = *std::get<GraphAux>(node.aux).edges;
      Tensor& ga = grads[in[0]];
      for (std::size_t e = 0; e < edges.pairs.size(); ++e) {
        const auto gu = g.row(static_cast<std::size_t>(edges.pairs[e].u));
        const auto gv = g.row(static_cast<std::size_t>(edges.pairs[e].v));
        auto dst = ga.row(e);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += gu[c] + gv[c];
      }
      break;
    }
    case OpKind::kBatchNorm: {
      const auto& aux = std::get<BatchNormAux>(node.aux);
      const Tensor& gamma = value(in[1]);
      Tensor& gx = grads[in[0]];
      Tensor& ggamma = grads[in[1]];
      Tensor& gbeta = grads[in[2]];
      const std::size_t rows = g.rows();
      const std::size_t cols = g.cols();
      for (std::size_t c = 0; c < cols; ++c) {
        double sum_g = 0.0;
        double sum_gn = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          sum_g += g(r, c);
          sum_gn += g(r, c) * aux.normalized(r, c);
        }
        ggamma[c] += sum_gn;
        gbeta[c] += sum_g;
        const double k = gamma[c] * aux.inv_std[c];
        if (aux.training) {
          const double n = static_cast<double>(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            gx(r, c) += k * (g(r, c) - sum_g / n - aux.normalized(r, c) * sum_gn / n);
          }
        } else {
          for (std::size_t r = 0; r < rows; ++r) gx(r, c) += k * g(r, c);
        }
      }
      break;
    }
    case OpKind::kL1Distance: {
      const Tensor& a = value(in[0]);
      const Tensor& b = value(in[1]);
      Tensor& ga = grads[in[0]];
      Tensor& gb = grads[in[1]];
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double s = sign(a[i] - b[i]) * g[0];
        ga[i] += s;
        gb[i] -= s;
      }
      break;
    }
    case OpKind::kBceWithLogits: {
      const Tensor& z = value(in[0]);
      const Tensor& t = value(in[1]);
      Tensor& gz = grads[in[0]];
      Tensor& gt = grads[in[1]];
      for (std::size_t i = 0; i < z.size(); ++i) {
        gz[i] += (stable_sigmoid(z[i]) - t[i]) * g[0];
        gt[i] -= z[i] * g[0];
      }
      break;
    }
  }
}

}  // namespace genn::diff
