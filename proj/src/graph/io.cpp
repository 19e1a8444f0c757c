// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/graph/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "genn/common/error.hpp"

namespace genn::graph {
namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void parse_error(std::string_view file, std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse,
       std::string(file) + " line " + std::to_string(line_no) + ": " + what);
}

template <class T>
T parse_number(std::string_view field, std::string_view file, std::size_t line_no) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    parse_error(file, line_no, "cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Graph read_graph(std::istream& nodes, std::istream& edges) {
  std::string line;
  std::size_t line_no = 1;
  if (!next_line(nodes, line)) parse_error("node file", 1, "missing header");
  const auto header = split_fields(line, ',');
  if (header.empty() || header[0] != "node_id") {
    parse_error("node file", 1, "header must start with node_id");
  }
  const std::size_t dim = header.size() - 1;
  std::vector<double> features;
  std::size_t num_nodes = 0;
  while (next_line(nodes, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != dim + 1) {
      parse_error("node file", line_no, "expected " + std::to_string(dim + 1) + " fields, got " +
                                            std::to_string(fields.size()));
    }
    const auto id = parse_number<long>(fields[0], "node file", line_no);
    if (id != static_cast<long>(num_nodes)) {
      parse_error("node file", line_no, "node ids must be 0..N-1 in order, got " + std::to_string(id));
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      features.push_back(parse_number<double>(fields[c], "node file", line_no));
    }
    ++num_nodes;
  }

  line_no = 1;
  if (!next_line(edges, line)) parse_error("edge file", 1, "missing header");
  if (line != "src,dst,labels") parse_error("edge file", 1, "header must be src,dst,labels");
  struct RawEdge {
    int src, dst;
    std::vector<int> types;
  };
  std::vector<RawEdge> raw;
  int max_type = -1;
  while (next_line(edges, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != 3) {
      parse_error("edge file", line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    RawEdge e{parse_number<int>(fields[0], "edge file", line_no),
              parse_number<int>(fields[1], "edge file", line_no),
              {}};
    if (fields[2].empty()) parse_error("edge file", line_no, "empty label list");
    for (auto tok : split_fields(fields[2], ';')) {
      const int t = parse_number<int>(tok, "edge file", line_no);
      if (t < 0) parse_error("edge file", line_no, "negative type index");
      e.types.push_back(t);
      max_type = std::max(max_type, t);
    }
    for (int id : {e.src, e.dst}) {
      if (id < 0 || static_cast<std::size_t>(id) >= num_nodes) {
        fail(ErrorCode::kNodeOutOfRange, "edge file line " + std::to_string(line_no) +
                                             ": node id " + std::to_string(id) +
                                             " out of range [0," + std::to_string(num_nodes) + ")");
      }
    }
    raw.push_back(std::move(e));
  }

  const auto num_types = static_cast<std::size_t>(max_type + 1);
  std::vector<Edge> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    LabelBits bits(num_types, false);
    for (int t : r.types) bits[static_cast<std::size_t>(t)] = true;
    out.push_back({r.src, r.dst, std::move(bits)});
  }
  return Graph(diff::Tensor(num_nodes, dim, std::move(features)), num_types, std::move(out));
}

Graph load_graph(const std::filesystem::path& node_file, const std::filesystem::path& edge_file) {
  auto nodes = open_in(node_file);
  auto edges = open_in(edge_file);
  return read_graph(nodes, edges);
}

void write_graph(const Graph& graph, std::ostream& nodes, std::ostream& edges) {
  nodes << "node_id";
  for (std::size_t c = 0; c < graph.feature_dim(); ++c) nodes << ",f" << c;
  nodes << '\n';
  for (std::size_t r = 0; r < graph.num_nodes(); ++r) {
    nodes << r;
    for (double v : graph.features().row(r)) nodes << ',' << format_double(v);
    nodes << '\n';
  }
  edges << "src,dst,labels\n";
  for (const Edge& e : graph.edges()) {
    edges << e.src << ',' << e.dst << ',';
    bool first = true;
    for (int t : e.types()) {
      if (!first) edges << ';';
      edges << t;
      first = false;
    }
    edges << '\n';
  }
}

void write_graph(const Graph& graph, const std::filesystem::path& node_file,
                 const std::filesystem::path& edge_file) {
  auto nodes = open_out(node_file);
  auto edges = open_out(edge_file);
  write_graph(graph, nodes, edges);
}

EdgeSplit read_split(std::istream& in, std::size_t num_edges) {
  std::string line;
  std::size_t line_no = 1;
  if (!next_line(in, line) || line != "edge_index,split") {
    parse_error("split file", 1, "header must be edge_index,split");
  }
  EdgeSplit split;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != 2) parse_error("split file", line_no, "expected 2 fields");
    const auto idx = parse_number<std::size_t>(fields[0], "split file", line_no);
    if (fields[1] == "train") {
      split.train.push_back(idx);
    } else if (fields[1] == "val") {
      split.val.push_back(idx);
    } else if (fields[1] == "test") {
      split.test.push_back(idx);
    } else {
      parse_error("split file", line_no, "unknown split '" + std::string(fields[1]) + "'");
    }
  }
  validate_split(split, num_edges);
  return split;
}

EdgeSplit load_split(const std::filesystem::path& split_file, std::size_t num_edges) {
  auto in = open_in(split_file);
  return read_split(in, num_edges);
}

void write_split(const EdgeSplit& split, std::ostream& out) {
  out << "edge_index,split\n";
  for (std::size_t i : split.train) out << i << ",train\n";
  for (std::size_t i : split.val) out << i << ",val\n";
  for (std::size_t i : split.test) out << i << ",test\n";
}

void write_split(const EdgeSplit& split, const std::filesystem::path& split_file) {
  auto out = open_out(split_file);
  write_split(split, out);
}

}  // namespace genn::graph
