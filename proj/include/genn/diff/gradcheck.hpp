// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "genn/diff/nn.hpp"
#include "genn/diff/tensor.hpp"

namespace genn::diff {

/// Scalar objective over a point. When `grad` is non-null the function also
/// writes its analytic gradient there (same shape as the point).
using ScalarFunction = std::function<double(const Tensor& point, Tensor* grad)>;

/// Max over coordinates of |analytic − numeric| / max(1, |numeric|), with the
/// numeric derivative from central differences of width 2·step.
double finite_difference_check(const ScalarFunction& function, const Tensor& point, double step);

/// Adapts an objective over a parameter list to a ScalarFunction over the
/// flattened parameters. `objective` builds a tape, returns the loss node and
/// leaves the binder with every parameter bound.
ScalarFunction over_parameters(const ParamList& params,
                               std::function<NodeId(Context&)> objective);

}  // namespace genn::diff
