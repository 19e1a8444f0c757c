// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/common/error.hpp"

namespace genn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kNonScalarLoss: return "non_scalar_loss";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicateEdge: return "duplicate_edge";
    case ErrorCode::kNodeOutOfRange: return "node_out_of_range";
    case ErrorCode::kRatioSum: return "ratio_sum";
    case ErrorCode::kDegenerateGraph: return "degenerate_graph";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kEmptySplit: return "empty_split";
    case ErrorCode::kQueryOverlapsTrain: return "query_overlaps_train";
    case ErrorCode::kDegenerateLabels: return "degenerate_labels";
    case ErrorCode::kNoPositives: return "no_positives";
    case ErrorCode::kEmptyEvaluation: return "empty_evaluation";
    case ErrorCode::kConstantVector: return "constant_vector";
    case ErrorCode::kMemoryBound: return "memory_bound";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCheckpoint: return "checkpoint";
  }
  return "unknown";
}

}  // namespace genn
