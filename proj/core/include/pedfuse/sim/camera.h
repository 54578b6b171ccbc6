// core/include/pedfuse/sim/camera.h

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

#ifndef PEDFUSE_SIM_CAMERA_H_
#define PEDFUSE_SIM_CAMERA_H_

#include "pedfuse/sim/scene.h"
#include "pedfuse/tensor.h"

namespace pedfuse {

// Pixel bounding box of the person billboard in the camera image.
struct PersonProjection {
  bool visible = false;
  int u0 = 0, u1 = 0;  // inclusive pixel columns
  int v0 = 0, v1 = 0;  // inclusive pixel rows
  double v_top = 0.0, v_bot = 0.0;  // continuous rows, for texturing
};

// Projects the upright person billboard at world position (x, y) through the
// rig pinhole camera. visible == false when no silhouette pixel lands inside
// the image (behind the camera or outside the horizontal field of view).
PersonProjection project_person(const std::array<double, 2>& world_xy,
                                const SceneConfig& config);

// Renders the camera view at time t: textured person rectangle over a plain
// background, every pixel scaled by brightness in [0,1]. Output [3,H,W].
Tensor<float> render_frame(const Trajectory& traj, double t,
                           const SceneConfig& config, double brightness);

// Binary silhouette of the same view, [H,W] with values {0,1}.
Tensor<float> render_mask(const Trajectory& traj, double t,
                          const SceneConfig& config);

bool person_in_fov(const Trajectory& traj, double t, const SceneConfig& config);

}  // namespace pedfuse

#endif  // PEDFUSE_SIM_CAMERA_H_
