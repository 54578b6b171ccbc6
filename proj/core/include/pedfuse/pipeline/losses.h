// core/include/pedfuse/pipeline/losses.h

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

#ifndef PEDFUSE_PIPELINE_LOSSES_H_
#define PEDFUSE_PIPELINE_LOSSES_H_

#include <array>

#include "pedfuse/geometry.h"
#include "pedfuse/tensor.h"

namespace pedfuse {

// Scalar loss definitions shared by training, evaluation and the tests. The
// autodiff ops in nn/graph.h compute the same formulas; the unit tests pin
// the two paths together.

// Mean squared error over the 7 box parameters; the yaw difference is
// wrapped to (-pi, pi] before squaring.
double loss_regression(const std::array<double, 7>& target,
                       const std::array<double, 7>& pred);
double loss_regression(const Box3D& target, const Box3D& pred);

// Binary cross-entropy with probabilities clamped to [eps, 1-eps].
double loss_detection(double target, double pred);

// Per-pixel binary cross-entropy against a {0,1} mask, mean over pixels.
// pred_class1 is the pedestrian-class probability map.
double loss_segmentation(const Tensor<float>& target,
                         const Tensor<float>& pred_class1);

// L_r + lambda1 * L_d + lambda2 * L_s.
double loss_total(double l_r, double l_d, double l_s, double lambda1,
                  double lambda2);

}  // namespace pedfuse

#endif  // PEDFUSE_PIPELINE_LOSSES_H_
