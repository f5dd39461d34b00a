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

#ifndef SURVGEO_SYNTH_HPP
#define SURVGEO_SYNTH_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "survgeo/geometry.hpp"
#include "survgeo/raster.hpp"

namespace survgeo {

/// Points X with dot(normal, X) = offset, world frame. `normal` is unit.
struct Plane {
  Vec3 normal;
  double offset = 0.0;
};

struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

using Primitive = std::variant<Plane, Sphere>;

/// Low-frequency sinusoidal 3-channel texture of the world-space surface
/// point. `frequency` is in cycles per meter and must stay band-limited at
/// the rendered scale (< 0.25 cycles/pixel), otherwise bilinear
/// interpolation error dominates geometric error in downstream checks.
struct Texture {
  double frequency = 0.35;
  double amplitude = 0.35;
  double bias = 0.5;

  void shade(const Vec3& point, float rgb[3]) const;
};

/// Analytic scene: every camera ray either hits a primitive or is sky
/// (rendered invalid).
struct Scene {
  std::vector<Primitive> primitives;
  Texture texture;
};

/// Per-frame body pose, world-from-body.
struct Trajectory {
  std::vector<RigidTransform> poses;
};

/// Nearest ray-primitive intersection depth (camera-frame z) per pixel.
/// Misses are invalid. `body_pose` is world-from-body.
ScalarMap render_depth(const Scene& scene, const Rig& rig,
                       const RigidTransform& body_pose, int camera_id);

/// Texture evaluated at the intersection point. Sky pixels get a fixed
/// backdrop color; their invalidity travels with the depth mask.
ColorImage render_image(const Scene& scene, const Rig& rig,
                        const RigidTransform& body_pose, int camera_id);

/// Desk-scale default: 6 outward-facing cameras at 60 degree yaw spacing on
/// a 0.15 m circle, 128x160 px, fx = fy = 120.
Rig default_rig();

/// Ground-truth camera-frame motion t -> t': W_i(t')^-1 ∘ W_i(t) where
/// W_i = body_pose ∘ E_i.
RigidTransform ground_truth_camera_motion(const Rig& rig, int camera_id,
                                          const RigidTransform& body_t,
                                          const RigidTransform& body_tprime);

Scene load_scene(const std::string& path);
Trajectory load_trajectory(const std::string& path);

}  // namespace survgeo

#endif  // SURVGEO_SYNTH_HPP
