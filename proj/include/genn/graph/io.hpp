// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "genn/graph/graph.hpp"
#include "genn/graph/split.hpp"

namespace genn::graph {

// Node file:  node_id,f0,f1,...   (ids 0..N-1 in order)
// Edge file:  src,dst,labels      (labels: ';'-separated type indices, non-empty)
// Split file: edge_index,split    (split in {train,val,test})

Graph load_graph(const std::filesystem::path& node_file, const std::filesystem::path& edge_file);
Graph read_graph(std::istream& nodes, std::istream& edges);

void write_graph(const Graph& graph, const std::filesystem::path& node_file,
                 const std::filesystem::path& edge_file);
void write_graph(const Graph& graph, std::ostream& nodes, std::ostream& edges);

EdgeSplit load_split(const std::filesystem::path& split_file, std::size_t num_edges);
EdgeSplit read_split(std::istream& in, std::size_t num_edges);
void write_split(const EdgeSplit& split, const std::filesystem::path& split_file);
void write_split(const EdgeSplit& split, std::ostream& out);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace genn::graph
