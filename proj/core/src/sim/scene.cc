// core/src/sim/scene.cc

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

#include "pedfuse/sim/scene.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pedfuse/rng.h"

namespace pedfuse {

using nlohmann::ordered_json;

namespace {

ordered_json vec3_to_json(const Vec3& v) {
  return ordered_json::array({v.x, v.y, v.z});
}
Vec3 vec3_from_json(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

void SceneConfig::validate() const {
  PF_CHECK_CFG(area_extent.x > 0 && area_extent.y > 0 && area_extent.z > 0,
               "scene: area_extent must be positive");
  PF_CHECK_CFG(mic_positions.size() == 4, "scene: expected 4 microphones");
  PF_CHECK_CFG(sample_rate > 0, "scene: sample_rate must be positive");
  PF_CHECK_CFG(frame_rate > 0, "scene: frame_rate must be positive");
  PF_CHECK_CFG(speed_of_sound > 0, "scene: speed_of_sound must be positive");
  PF_CHECK_CFG(person_dims.x > 0 && person_dims.y > 0 && person_dims.z > 0,
               "scene: person_dims must be positive");
  PF_CHECK_CFG(step_interval_s > 0, "scene: step_interval_s must be positive");
  PF_CHECK_CFG(max_walk_speed > 0, "scene: max_walk_speed must be positive");
  PF_CHECK_CFG(camera.width > 0 && camera.height > 0 &&
                   camera.hfov_deg > 0 && camera.hfov_deg < 180,
               "scene: bad camera parameters");
}

std::string scene_config_to_json(const SceneConfig& c) {
  ordered_json j;
  j["area_extent"] = vec3_to_json(c.area_extent);
  j["mic_positions"] = ordered_json::array();
  for (const auto& m : c.mic_positions) j["mic_positions"].push_back(vec3_to_json(m));
  j["camera"] = {{"position", vec3_to_json(c.camera.position)},
                 {"yaw", c.camera.yaw},
                 {"hfov_deg", c.camera.hfov_deg},
                 {"width", c.camera.width},
                 {"height", c.camera.height}};
  j["sample_rate"] = c.sample_rate;
  j["frame_rate"] = c.frame_rate;
  j["speed_of_sound"] = c.speed_of_sound;
  j["noise_snr_db"] = c.noise_snr_db;
  j["person_dims"] = vec3_to_json(c.person_dims);
  j["step_interval_s"] = c.step_interval_s;
  j["max_walk_speed"] = c.max_walk_speed;
  j["seed"] = c.seed;
  return j.dump(2);
}

SceneConfig scene_config_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  SceneConfig c;
  if (j.contains("area_extent")) c.area_extent = vec3_from_json(j["area_extent"]);
  if (j.contains("mic_positions")) {
    c.mic_positions.clear();
    for (const auto& m : j["mic_positions"]) c.mic_positions.push_back(vec3_from_json(m));
  }
  if (j.contains("camera")) {
    const auto& cam = j["camera"];
    if (cam.contains("position")) c.camera.position = vec3_from_json(cam["position"]);
    if (cam.contains("yaw")) c.camera.yaw = cam["yaw"].get<double>();
    if (cam.contains("hfov_deg")) c.camera.hfov_deg = cam["hfov_deg"].get<double>();
    if (cam.contains("width")) c.camera.width = cam["width"].get<int>();
    if (cam.contains("height")) c.camera.height = cam["height"].get<int>();
  }
  if (j.contains("sample_rate")) c.sample_rate = j["sample_rate"].get<int>();
  if (j.contains("frame_rate")) c.frame_rate = j["frame_rate"].get<double>();
  if (j.contains("speed_of_sound")) c.speed_of_sound = j["speed_of_sound"].get<double>();
  if (j.contains("noise_snr_db")) c.noise_snr_db = j["noise_snr_db"].get<double>();
  if (j.contains("person_dims")) c.person_dims = vec3_from_json(j["person_dims"]);
  if (j.contains("step_interval_s")) c.step_interval_s = j["step_interval_s"].get<double>();
  if (j.contains("max_walk_speed")) c.max_walk_speed = j["max_walk_speed"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  c.validate();
  return c;
}

std::array<double, 2> Trajectory::position_at(double t) const {
  PF_CHECK_MSG(!times.empty(), "trajectory is empty");
  if (t <= times.front()) return positions.front();
  if (t >= times.back()) return positions.back();
  const double ft = t * frame_rate;
  const size_t i = std::min(static_cast<size_t>(ft), times.size() - 2);
  const double a = ft - static_cast<double>(i);
  return {positions[i][0] * (1 - a) + positions[i + 1][0] * a,
          positions[i][1] * (1 - a) + positions[i + 1][1] * a};
}

double Trajectory::heading_at(double t) const {
  PF_CHECK_MSG(!times.empty(), "trajectory is empty");
  if (t <= times.front()) return headings.front();
  if (t >= times.back()) return headings.back();
  const size_t i = std::min(static_cast<size_t>(t * frame_rate), times.size() - 1);
  return headings[i];
}

Trajectory generate_trajectory(const SceneConfig& config, double duration_s,
                               uint64_t seed) {
  config.validate();
  PF_CHECK_CFG(duration_s > 0, "trajectory: duration must be positive");

  const size_t n = static_cast<size_t>(std::llround(duration_s * config.frame_rate));
  PF_CHECK_CFG(n >= 1, "trajectory: duration too short for one frame");

  Rng rng(derive_seed(seed, "trajectory"));
  const double dt = 1.0 / config.frame_rate;
  const double margin = 0.25;
  const double x_lo = margin, x_hi = config.area_extent.x - margin;
  const double y_lo = margin, y_hi = config.area_extent.y - margin;

  Trajectory traj;
  traj.frame_rate = config.frame_rate;
  traj.duration_s = static_cast<double>(n) / config.frame_rate;
  traj.times.resize(n);
  traj.positions.resize(n);
  traj.headings.resize(n);

  double x = rng.uniform(x_lo, x_hi);
  double y = rng.uniform(y_lo, y_hi);
  double heading = rng.uniform(-kPi, kPi);
  double speed = 0.0;
  double target_speed = rng.uniform(0.2, 0.85) * config.max_walk_speed;
  const size_t retarget_every = std::max<size_t>(1, static_cast<size_t>(2.0 * config.frame_rate));

  for (size_t k = 0; k < n; ++k) {
    traj.times[k] = static_cast<double>(k) * dt;
    traj.positions[k] = {x, y};
    traj.headings[k] = wrap_angle(heading);

    if ((k + 1) % retarget_every == 0)
      target_speed = rng.uniform(0.2, 0.85) * config.max_walk_speed;
    speed += 0.2 * (target_speed - speed);
    heading += rng.normal(0.0, 0.12);

    double nx = x + speed * dt * std::cos(heading);
    double ny = y + speed * dt * std::sin(heading);
    if (nx < x_lo || nx > x_hi) {
      heading = kPi - heading;
      nx = x + speed * dt * std::cos(heading);
    }
    if (ny < y_lo || ny > y_hi) {
      heading = -heading;
      ny = y + speed * dt * std::sin(heading);
    }
    x = std::clamp(nx, x_lo, x_hi);
    y = std::clamp(ny, y_lo, y_hi);
  }
  return traj;
}

}  // namespace pedfuse
