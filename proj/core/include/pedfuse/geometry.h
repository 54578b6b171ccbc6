// core/include/pedfuse/geometry.h

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

#ifndef PEDFUSE_GEOMETRY_H_
#define PEDFUSE_GEOMETRY_H_

#include <array>
#include <cmath>

#include "pedfuse/common.h"

namespace pedfuse {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// 3D bounding box in the rig frame (x forward, y left, z up):
// center, size (length, width, height) and yaw about +z.
struct Box3D {
  Vec3 center;
  Vec3 size;
  double yaw = 0;

  std::array<double, 7> to_array() const {
    return {center.x, center.y, center.z, size.x, size.y, size.z, yaw};
  }
  static Box3D from_array(const std::array<double, 7>& a) {
    return Box3D{{a[0], a[1], a[2]}, {a[3], a[4], a[5]}, a[6]};
  }

  void validate() const {
    PF_CHECK_MSG(size.x > 0 && size.y > 0 && size.z > 0,
                 "box size components must be positive");
    PF_CHECK_MSG(yaw > -kPi - 1e-12 && yaw <= kPi + 1e-12,
                 "box yaw out of (-pi, pi]");
  }
};

}  // namespace pedfuse

#endif  // PEDFUSE_GEOMETRY_H_
