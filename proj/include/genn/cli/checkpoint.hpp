// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "genn/eval/pipeline.hpp"

namespace genn::cli {

inline constexpr std::string_view kCheckpointMagic = "GENN1";

struct ModelDims {
  std::size_t feature_dim = 0;
  std::size_t num_types = 0;
};

/// JSON document: magic, method, dims, the training and LP settings, and a
/// map from tensor name to {shape: [rows, cols], data: [row-major values]}.
std::string checkpoint_json(const eval::TrainedModel& model, ModelDims dims);
/// Throws kCheckpoint on a wrong magic, unknown method, missing or extra
/// tensor, or shape mismatch.
eval::TrainedModel parse_checkpoint(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const eval::TrainedModel& model,
                     ModelDims dims);
eval::TrainedModel load_checkpoint(const std::filesystem::path& path);

/// Freshly initialized model of the method's architecture; what a checkpoint
/// is read into.
eval::TrainedModel initial_model(eval::Method method, ModelDims dims, const TrainConfig& config,
                                 const baselines::LpConfig& lp);

}  // namespace genn::cli
