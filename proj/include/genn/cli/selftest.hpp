// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace genn::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // gradient error, or |observed − expected| for oracles
  double tolerance = 0.0;
};

/// Finite-difference checks of the training objectives on a small synthetic
/// graph plus closed-form metric and label-propagation oracles.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace genn::cli
