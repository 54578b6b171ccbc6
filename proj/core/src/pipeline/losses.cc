// core/src/pipeline/losses.cc

// Copyright 2026  pedfuse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pedfuse/pipeline/losses.h"

#include <algorithm>
#include <cmath>

#include "pedfuse/nn/graph.h"

namespace pedfuse {

double loss_regression(const std::array<double, 7>& target,
                       const std::array<double, 7>& pred) {
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double d = pred[static_cast<size_t>(i)] - target[static_cast<size_t>(i)];
    acc += d * d;
  }
  const double dyaw = wrap_angle(pred[6] - target[6]);
  acc += dyaw * dyaw;
  return acc / 7.0;
}

double loss_regression(const Box3D& target, const Box3D& pred) {
  return loss_regression(target.to_array(), pred.to_array());
}

double loss_detection(double target, double pred) {
  PF_CHECK_MSG(target >= 0.0 && target <= 1.0 && pred >= 0.0 && pred <= 1.0,
               "loss_detection: inputs must lie in [0,1]");
  const double eps = nn::kProbEps;
  const double p = std::clamp(pred, eps, 1.0 - eps);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

double loss_segmentation(const Tensor<float>& target,
                         const Tensor<float>& pred_class1) {
  PF_CHECK_MSG(target.same_shape(pred_class1),
               "loss_segmentation: shape mismatch");
  const double eps = nn::kProbEps;
  double acc = 0.0;
  for (size_t i = 0; i < target.numel(); ++i) {
    const double t = target[i];
    const double p =
        std::clamp(static_cast<double>(pred_class1[i]), eps, 1.0 - eps);
    acc -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
  }
  return acc / static_cast<double>(target.numel());
}

double loss_total(double l_r, double l_d, double l_s, double lambda1,
                  double lambda2) {
  PF_CHECK_CFG(lambda1 >= 0.0 && lambda2 >= 0.0,
               "loss_total: lambdas must be non-negative");
  return l_r + lambda1 * l_d + lambda2 * l_s;
}

}  // namespace pedfuse
