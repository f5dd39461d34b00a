// Copyright 2026 The survgeo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only reference implementations, independent of the library's
// geometry path: plain-array 4x4 homogeneous matrix algebra and closed-form
// ray intersections. Everything here is deliberately written without Eigen
// or survgeo types so the two routes cannot share a bug.

#ifndef SURVGEO_TESTS_ORACLES_HPP
#define SURVGEO_TESTS_ORACLES_HPP

#include <array>
#include <cmath>

namespace oracle {

using Mat4 = std::array<double, 16>;  // row-major

inline Mat4 identity() {
  Mat4 m{};
  m[0] = m[5] = m[10] = m[15] = 1.0;
  return m;
}

inline Mat4 multiply(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double sum = 0.0;
      for (int k = 0; k < 4; ++k) sum += a[r * 4 + k] * b[k * 4 + c];
      out[r * 4 + c] = sum;
    }
  }
  return out;
}

/// Inverse of a rigid homogeneous matrix: transpose the rotation block,
/// negate-rotate the translation.
inline Mat4 rigid_inverse(const Mat4& m) {
  Mat4 out = identity();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out[r * 4 + c] = m[c * 4 + r];
  }
  for (int r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) sum += out[r * 4 + c] * m[c * 4 + 3];
    out[r * 4 + 3] = -sum;
  }
  return out;
}

inline Mat4 rot_z(double angle) {
  Mat4 m = identity();
  m[0] = std::cos(angle);
  m[1] = -std::sin(angle);
  m[4] = std::sin(angle);
  m[5] = std::cos(angle);
  return m;
}

inline Mat4 rot_y(double angle) {
  Mat4 m = identity();
  m[0] = std::cos(angle);
  m[2] = std::sin(angle);
  m[8] = -std::sin(angle);
  m[10] = std::cos(angle);
  return m;
}

inline Mat4 translation(double x, double y, double z) {
  Mat4 m = identity();
  m[3] = x;
  m[7] = y;
  m[11] = z;
  return m;
}

inline std::array<double, 3> apply(const Mat4& m,
                                   const std::array<double, 3>& p) {
  std::array<double, 3> out{};
  for (int r = 0; r < 3; ++r) {
    out[r] = m[r * 4 + 0] * p[0] + m[r * 4 + 1] * p[1] + m[r * 4 + 2] * p[2] +
             m[r * 4 + 3];
  }
  return out;
}

/// Depth (ray parameter with unit-z direction) at which the pixel ray of a
/// camera at `world_from_camera` meets the plane dot(n, X) = offset, or -1.
inline double plane_ray_depth(const Mat4& world_from_camera, double fx,
                              double fy, double cx, double cy, double u,
                              double v, const std::array<double, 3>& n,
                              double offset) {
  const std::array<double, 3> dir_cam{(u - cx) / fx, (v - cy) / fy, 1.0};
  std::array<double, 3> dir{};
  for (int r = 0; r < 3; ++r) {
    dir[r] = world_from_camera[r * 4 + 0] * dir_cam[0] +
             world_from_camera[r * 4 + 1] * dir_cam[1] +
             world_from_camera[r * 4 + 2] * dir_cam[2];
  }
  const std::array<double, 3> origin{world_from_camera[3],
                                     world_from_camera[7],
                                     world_from_camera[11]};
  const double denom = n[0] * dir[0] + n[1] * dir[1] + n[2] * dir[2];
  if (std::abs(denom) < 1e-12) return -1.0;
  const double num =
      offset - (n[0] * origin[0] + n[1] * origin[1] + n[2] * origin[2]);
  const double s = num / denom;
  return s > 0.0 ? s : -1.0;
}

/// Nearest positive intersection depth with a sphere, or -1.
inline double sphere_ray_depth(const Mat4& world_from_camera, double fx,
                               double fy, double cx, double cy, double u,
                               double v, const std::array<double, 3>& center,
                               double radius) {
  const std::array<double, 3> dir_cam{(u - cx) / fx, (v - cy) / fy, 1.0};
  std::array<double, 3> dir{};
  for (int r = 0; r < 3; ++r) {
    dir[r] = world_from_camera[r * 4 + 0] * dir_cam[0] +
             world_from_camera[r * 4 + 1] * dir_cam[1] +
             world_from_camera[r * 4 + 2] * dir_cam[2];
  }
  const std::array<double, 3> oc{world_from_camera[3] - center[0],
                                 world_from_camera[7] - center[1],
                                 world_from_camera[11] - center[2]};
  const double a = dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2];
  const double b = 2.0 * (oc[0] * dir[0] + oc[1] * dir[1] + oc[2] * dir[2]);
  const double c =
      oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - radius * radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return -1.0;
  const double sq = std::sqrt(disc);
  const double s0 = (-b - sq) / (2.0 * a);
  if (s0 > 0.0) return s0;
  const double s1 = (-b + sq) / (2.0 * a);
  return s1 > 0.0 ? s1 : -1.0;
}

}  // namespace oracle

#endif  // SURVGEO_TESTS_ORACLES_HPP
