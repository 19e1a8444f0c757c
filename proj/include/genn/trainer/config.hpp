// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace genn {

enum class Aggregation { kSum, kMean };

struct TrainConfig {
  double lr_pretrain = 0.01;
  double lr_main = 0.001;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  int patience = 35;
  double threshold = 0.4;
  int max_epochs = 200;       // minimax epochs, and the cap for single-model baselines
  int pretrain_epochs = 100;  // GNN epochs before the minimax phase
  int finetune_epochs = 100;  // test-head epochs after GENN⁻ training
  std::uint64_t seed = 0;
  double negative_ratio = 1.0;
  Aggregation aggregation = Aggregation::kSum;

  std::size_t hidden_dim = 32;   // message-passing state size M
  std::size_t mlp_hidden = 100;  // hidden width of decoder, readout and MLP baseline
  std::size_t num_layers = 2;
  double clip_norm = 5.0;

  /// Throws kConfig naming the first invalid field.
  void validate() const;
};

}  // namespace genn
