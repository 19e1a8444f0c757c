// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>

namespace genn {

/// Unordered node pair; `canonical()` puts the smaller id first.
struct NodePair {
  int u = 0;
  int v = 0;

  NodePair canonical() const noexcept { return {std::min(u, v), std::max(u, v)}; }
  std::uint64_t key() const noexcept {
    const NodePair c = canonical();
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.u)) << 32) |
           static_cast<std::uint32_t>(c.v);
  }

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

}  // namespace genn
