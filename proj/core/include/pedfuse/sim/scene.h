// core/include/pedfuse/sim/scene.h

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

#ifndef PEDFUSE_SIM_SCENE_H_
#define PEDFUSE_SIM_SCENE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pedfuse/geometry.h"

namespace pedfuse {

struct CameraConfig {
  // Pose in the rig frame: mounted on the rig pole, looking along +x.
  Vec3 position{0.0, 0.0, 1.0};
  double yaw = 0.0;
  double hfov_deg = 90.0;
  int width = 320;
  int height = 240;
};

// One walking person inside a rectangular area, observed by a rig at the
// area center carrying a 4-mic cross array and a camera.
struct SceneConfig {
  Vec3 area_extent{4.5, 3.5, 3.0};
  // Rig frame (x forward, y left, z up), origin on the ground under the
  // array center. Default: cross pattern, 0.5 m from the array center.
  std::vector<Vec3> mic_positions{{0.5, 0.0, 0.5},
                                  {-0.5, 0.0, 0.5},
                                  {0.0, 0.5, 0.5},
                                  {0.0, -0.5, 0.5}};
  CameraConfig camera;
  int sample_rate = 48000;
  double frame_rate = 20.0;
  double speed_of_sound = 343.0;
  // Additive white noise level; values >= kNoiseOffDb disable noise.
  double noise_snr_db = 30.0;
  Vec3 person_dims{0.5, 0.5, 1.7};
  double step_interval_s = 0.5;
  double max_walk_speed = 1.5;
  uint64_t seed = 7;

  static constexpr double kNoiseOffDb = 200.0;

  // World position of the rig-frame origin (area center, on the ground).
  Vec3 rig_center_world() const {
    return {area_extent.x / 2.0, area_extent.y / 2.0, 0.0};
  }
  bool noise_enabled() const { return noise_snr_db < kNoiseOffDb; }

  void validate() const;
};

std::string scene_config_to_json(const SceneConfig& c);
SceneConfig scene_config_from_json(const std::string& text);

struct Trajectory {
  double frame_rate = 0.0;
  double duration_s = 0.0;
  std::vector<double> times;
  std::vector<std::array<double, 2>> positions;  // world xy, meters
  std::vector<double> headings;                  // radians

  size_t size() const { return times.size(); }

  // Linear interpolation, clamped to the span.
  std::array<double, 2> position_at(double t) const;
  double heading_at(double t) const;
};

// Seeded random walk sampled at config.frame_rate. Stays inside the area
// footprint and below max_walk_speed.
Trajectory generate_trajectory(const SceneConfig& config, double duration_s,
                               uint64_t seed);

}  // namespace pedfuse

#endif  // PEDFUSE_SIM_SCENE_H_
