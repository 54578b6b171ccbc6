// core/include/pedfuse/eval/bev.h

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

#ifndef PEDFUSE_EVAL_BEV_H_
#define PEDFUSE_EVAL_BEV_H_

#include <string>
#include <vector>

#include "pedfuse/geometry.h"
#include "pedfuse/png_io.h"
#include "pedfuse/sim/scene.h"

namespace pedfuse {

// Fixed marker colors: ground truth red, prediction green.
inline constexpr uint8_t kBevGtColor[3] = {255, 0, 0};
inline constexpr uint8_t kBevPredColor[3] = {0, 255, 0};

struct BevContext {
  double area_x = 4.5;             // footprint extent, meters
  double area_y = 3.5;
  std::vector<Vec3> mic_positions;  // rig frame

  static BevContext from_scene(const SceneConfig& cfg) {
    return {cfg.area_extent.x, cfg.area_extent.y, cfg.mic_positions};
  }
};

// Renders the top-down view: footprint border, rig origin and microphones,
// ground-truth box in red, predicted box in green (drawn last).
Image8 render_bev(const BevContext& ctx, const Box3D& gt, const Box3D& pred);

void visualize_bev(const BevContext& ctx, const Box3D& gt, const Box3D& pred,
                   const std::string& out_path);

}  // namespace pedfuse

#endif  // PEDFUSE_EVAL_BEV_H_
