// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/trainer/config.hpp"

#include <string>

#include "genn/common/error.hpp"

namespace genn {
namespace {

void require(bool ok, const char* field, const std::string& rule) {
  if (!ok) fail(ErrorCode::kConfig, std::string(field) + " " + rule);
}

}  // namespace

void TrainConfig::validate() const {
  require(lr_pretrain > 0.0, "lr_pretrain", "must be > 0");
  require(lr_main > 0.0, "lr_main", "must be > 0");
  require(lambda1 >= 0.0, "lambda1", "must be >= 0");
  require(lambda2 >= 0.0, "lambda2", "must be >= 0");
  require(lambda3 >= 0.0, "lambda3", "must be >= 0");
  require(patience >= 1, "patience", "must be >= 1");
  require(threshold > 0.0 && threshold < 1.0, "threshold", "must be in (0,1)");
  require(max_epochs >= 0, "max_epochs", "must be >= 0");
  require(pretrain_epochs >= 0, "pretrain_epochs", "must be >= 0");
  require(finetune_epochs >= 0, "finetune_epochs", "must be >= 0");
  require(negative_ratio >= 0.0, "negative_ratio", "must be >= 0");
  require(hidden_dim >= 1, "hidden_dim", "must be >= 1");
  require(mlp_hidden >= 1, "mlp_hidden", "must be >= 1");
  require(num_layers >= 1, "num_layers", "must be >= 1");
  require(clip_norm > 0.0, "clip_norm", "must be > 0");
}

}  // namespace genn
