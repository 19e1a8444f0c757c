// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#include "genn/diff/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "genn/common/error.hpp"

namespace genn::diff {

double finite_difference_check(const ScalarFunction& function, const Tensor& point,
                               double step) {
  if (!(step > 0.0)) fail(ErrorCode::kInvalidArgument, "finite_difference_check: step must be > 0");
  Tensor analytic(point.rows(), point.cols());
  function(point, &analytic);
  if (!analytic.same_shape(point)) {
    fail(ErrorCode::kShapeMismatch, "finite_difference_check: gradient shape " +
                                        analytic.shape_string() + " vs point " +
                                        point.shape_string());
  }
  double worst = 0.0;
  Tensor probe = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    probe[i] = point[i] + step;
    const double up = function(probe, nullptr);
    probe[i] = point[i] - step;
    const double down = function(probe, nullptr);
    probe[i] = point[i];
    const double numeric = (up - down) / (2.0 * step);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(numeric)));
  }
  return worst;
}

ScalarFunction over_parameters(const ParamList& params,
                               std::function<NodeId(Context&)> objective) {
  return [params, objective = std::move(objective)](const Tensor& point, Tensor* grad) {
    const Tensor saved = flatten(params);
    unflatten(point, params);
    Tape tape;
    Context ctx(tape, /*train=*/true);
    const NodeId loss = objective(ctx);
    const double value = tape.value(loss).item();
    if (grad != nullptr) {
      const Gradients g = tape.backward(loss);
      std::vector<double> flat;
      for (const auto& p : params) {
        const Tensor gp = ctx.bind.gradient(*p.tensor, g);
        flat.insert(flat.end(), gp.data().begin(), gp.data().end());
      }
      const std::size_t n = flat.size();
      *grad = Tensor(1, n, std::move(flat));
    }
    unflatten(saved, params);
    return value;
  };
}

}  // namespace genn::diff
