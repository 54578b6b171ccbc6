// core/src/sim/camera.cc

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

#include "pedfuse/sim/camera.h"

#include <algorithm>
#include <cmath>

namespace pedfuse {

namespace {

constexpr double kNearPlane = 0.05;
constexpr float kBackgroundGray = 0.35f;

struct CamFrame {
  double cx, cy, cz;  // camera position, rig frame
  double fwd_x, fwd_y;
  double left_x, left_y;
  double fx, fy, half_w, half_h;
};

CamFrame make_cam(const SceneConfig& cfg) {
  CamFrame c;
  c.cx = cfg.camera.position.x;
  c.cy = cfg.camera.position.y;
  c.cz = cfg.camera.position.z;
  c.fwd_x = std::cos(cfg.camera.yaw);
  c.fwd_y = std::sin(cfg.camera.yaw);
  c.left_x = -c.fwd_y;
  c.left_y = c.fwd_x;
  const double half_fov = cfg.camera.hfov_deg * kPi / 360.0;
  c.fx = (cfg.camera.width / 2.0) / std::tan(half_fov);
  c.fy = c.fx;  // square pixels
  c.half_w = cfg.camera.width / 2.0;
  c.half_h = cfg.camera.height / 2.0;
  return c;
}

}  // namespace

PersonProjection project_person(const std::array<double, 2>& world_xy,
                                const SceneConfig& config) {
  PersonProjection out;
  const CamFrame cam = make_cam(config);
  const Vec3 rig = config.rig_center_world();
  const double px = world_xy[0] - rig.x;
  const double py = world_xy[1] - rig.y;

  // Billboard endpoints, perpendicular to the camera->person sight line.
  const double dx = px - cam.cx, dy = py - cam.cy;
  const double r = std::hypot(dx, dy);
  if (r < 1e-6) return out;  // standing on the rig
  const double perp_x = -dy / r, perp_y = dx / r;
  const double hw = config.person_dims.y / 2.0;

  double u_min = 1e18, u_max = -1e18;
  double v_top = 1e18, v_bot = -1e18;
  for (double s : {-1.0, 1.0}) {
    const double ex = px + s * hw * perp_x - cam.cx;
    const double ey = py + s * hw * perp_y - cam.cy;
    const double zf = ex * cam.fwd_x + ey * cam.fwd_y;
    if (zf < kNearPlane) return out;  // behind or grazing the camera plane
    const double x_right = -(ex * cam.left_x + ey * cam.left_y);
    const double u = cam.fx * x_right / zf + cam.half_w;
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    v_top = std::min(v_top, cam.fy * (cam.cz - config.person_dims.z) / zf + cam.half_h);
    v_bot = std::max(v_bot, cam.fy * (cam.cz - 0.0) / zf + cam.half_h);
  }

  // Pixel centers at i + 0.5.
  int iu0 = static_cast<int>(std::ceil(u_min - 0.5));
  int iu1 = static_cast<int>(std::floor(u_max - 0.5));
  int iv0 = static_cast<int>(std::ceil(v_top - 0.5));
  int iv1 = static_cast<int>(std::floor(v_bot - 0.5));
  iu0 = std::max(iu0, 0);
  iv0 = std::max(iv0, 0);
  iu1 = std::min(iu1, config.camera.width - 1);
  iv1 = std::min(iv1, config.camera.height - 1);
  if (iu0 > iu1 || iv0 > iv1) return out;

  out.visible = true;
  out.u0 = iu0;
  out.u1 = iu1;
  out.v0 = iv0;
  out.v1 = iv1;
  out.v_top = v_top;
  out.v_bot = v_bot;
  return out;
}

Tensor<float> render_frame(const Trajectory& traj, double t,
                           const SceneConfig& config, double brightness) {
  PF_CHECK_CFG(t >= traj.times.front() - 1e-9 && t <= traj.duration_s + 1e-9,
               "render_frame: t outside trajectory span");
  PF_CHECK_CFG(brightness >= 0.0 && brightness <= 1.0,
               "render_frame: brightness must lie in [0,1]");

  const int w = config.camera.width, h = config.camera.height;
  Tensor<float> img({3, h, w});
  for (size_t i = 0; i < img.numel(); ++i) img[i] = kBackgroundGray;

  const PersonProjection p = project_person(traj.position_at(t), config);
  if (p.visible) {
    const double span = std::max(1e-9, p.v_bot - p.v_top);
    for (int v = p.v0; v <= p.v1; ++v) {
      // Fraction up the body at this row.
      const double fz = std::clamp((p.v_bot - (v + 0.5)) / span, 0.0, 1.0);
      float r, g, b;
      if (fz > 0.88) {
        r = 0.82f; g = 0.68f; b = 0.58f;       // head
      } else if (fz > 0.50) {
        r = 0.15f; g = 0.25f; b = 0.75f;       // torso
      } else {
        r = 0.22f; g = 0.22f; b = 0.28f;       // legs
      }
      for (int u = p.u0; u <= p.u1; ++u) {
        const double fu = (p.u1 > p.u0)
                              ? static_cast<double>(u - p.u0) / (p.u1 - p.u0)
                              : 0.5;
        const float shade = static_cast<float>(0.85 + 0.15 * std::cos(2.0 * kPi * fu));
        img.at(0, v, u) = r * shade;
        img.at(1, v, u) = g * shade;
        img.at(2, v, u) = b * shade;
      }
    }
  }

  if (brightness != 1.0) {
    const float f = static_cast<float>(brightness);
    for (size_t i = 0; i < img.numel(); ++i) img[i] *= f;
  }
  return img;
}

Tensor<float> render_mask(const Trajectory& traj, double t,
                          const SceneConfig& config) {
  PF_CHECK_CFG(t >= traj.times.front() - 1e-9 && t <= traj.duration_s + 1e-9,
               "render_mask: t outside trajectory span");
  Tensor<float> mask({config.camera.height, config.camera.width});
  const PersonProjection p = project_person(traj.position_at(t), config);
  if (p.visible)
    for (int v = p.v0; v <= p.v1; ++v)
      for (int u = p.u0; u <= p.u1; ++u) mask.at(v, u) = 1.0f;
  return mask;
}

bool person_in_fov(const Trajectory& traj, double t, const SceneConfig& config) {
  return project_person(traj.position_at(t), config).visible;
}

}  // namespace pedfuse
