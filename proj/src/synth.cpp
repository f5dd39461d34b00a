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

#include "survgeo/synth.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "survgeo/parallel.hpp"

namespace survgeo {

namespace {

constexpr double kMiss = -1.0;

/// Smallest ray parameter s > kDepthEpsilon with origin + s*dir on the
/// primitive, or kMiss. dir has unit z in camera convention, so s is the
/// camera-frame depth.
double intersect(const Primitive& prim, const Vec3& origin, const Vec3& dir) {
  if (const Plane* plane = std::get_if<Plane>(&prim)) {
    const double denom = plane->normal.dot(dir);
    if (std::abs(denom) < 1e-12) return kMiss;
    const double s = (plane->offset - plane->normal.dot(origin)) / denom;
    return s > kDepthEpsilon ? s : kMiss;
  }
  const Sphere& sphere = std::get<Sphere>(prim);
  const Vec3 oc = origin - sphere.center;
  const double a = dir.squaredNorm();
  const double b = 2.0 * oc.dot(dir);
  const double c = oc.squaredNorm() - sphere.radius * sphere.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kMiss;
  const double sq = std::sqrt(disc);
  const double s0 = (-b - sq) / (2.0 * a);
  if (s0 > kDepthEpsilon) return s0;
  const double s1 = (-b + sq) / (2.0 * a);
  return s1 > kDepthEpsilon ? s1 : kMiss;
}

struct CameraRays {
  RigidTransform world_from_camera;
  Vec3 origin;
};

CameraRays camera_rays(const Rig& rig, const RigidTransform& body_pose,
                       int camera_id) {
  const Camera& cam = rig.camera(camera_id);
  RigidTransform wfc = compose(body_pose, cam.extrinsics);
  Vec3 origin = wfc.translation();
  return {wfc, origin};
}

}  // namespace

void Texture::shade(const Vec3& p, float rgb[3]) const {
  const double w = 2.0 * std::numbers::pi * frequency;
  rgb[0] = static_cast<float>(bias +
                              amplitude * std::sin(w * p.x()) *
                                  std::sin(w * p.y()));
  rgb[1] = static_cast<float>(bias +
                              amplitude * std::sin(w * p.y()) *
                                  std::sin(w * p.z()));
  rgb[2] = static_cast<float>(bias +
                              amplitude * std::sin(w * p.z()) *
                                  std::sin(w * p.x()));
}

ScalarMap render_depth(const Scene& scene, const Rig& rig,
                       const RigidTransform& body_pose, int camera_id) {
  const Camera& cam = rig.camera(camera_id);
  const CameraRays rays = camera_rays(rig, body_pose, camera_id);
  ScalarMap depth(cam.height, cam.width, 0.0f, false);
  parallel_rows(cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const Vec3 dir_cam((x - cam.intrinsics.cx) / cam.intrinsics.fx,
                         (y - cam.intrinsics.cy) / cam.intrinsics.fy, 1.0);
      const Vec3 dir = rays.world_from_camera.rotation() * dir_cam;
      double best = std::numeric_limits<double>::infinity();
      for (const Primitive& prim : scene.primitives) {
        const double s = intersect(prim, rays.origin, dir);
        if (s != kMiss && s < best) best = s;
      }
      if (std::isfinite(best)) {
        depth.at(y, x) = static_cast<float>(best);
        depth.mask[depth.index(y, x)] = 1;
      }
    }
  });
  return depth;
}

ColorImage render_image(const Scene& scene, const Rig& rig,
                        const RigidTransform& body_pose, int camera_id) {
  const Camera& cam = rig.camera(camera_id);
  const CameraRays rays = camera_rays(rig, body_pose, camera_id);
  ColorImage image(cam.height, cam.width, 0.55f, 0.7f, 0.9f);  // sky backdrop
  parallel_rows(cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const Vec3 dir_cam((x - cam.intrinsics.cx) / cam.intrinsics.fx,
                         (y - cam.intrinsics.cy) / cam.intrinsics.fy, 1.0);
      const Vec3 dir = rays.world_from_camera.rotation() * dir_cam;
      double best = std::numeric_limits<double>::infinity();
      for (const Primitive& prim : scene.primitives) {
        const double s = intersect(prim, rays.origin, dir);
        if (s != kMiss && s < best) best = s;
      }
      if (std::isfinite(best)) {
        float rgb[3];
        scene.texture.shade(rays.origin + best * dir, rgb);
        for (int c = 0; c < 3; ++c) image.at(y, x, c) = rgb[c];
      }
    }
  });
  return image;
}

Rig default_rig() {
  std::vector<Camera> cameras;
  const int height = 128;
  const int width = 160;
  const double radius = 0.15;
  for (int i = 0; i < 6; ++i) {
    const double yaw = i * std::numbers::pi / 3.0;
    Mat3 r;
    r = Eigen::AngleAxisd(yaw, Vec3::UnitY()).toRotationMatrix();
    const Vec3 t(radius * std::sin(yaw), 0.0, radius * std::cos(yaw));
    Camera cam;
    cam.id = i + 1;
    cam.intrinsics = Intrinsics(120.0, 120.0, (width - 1) / 2.0,
                                (height - 1) / 2.0);
    cam.extrinsics = RigidTransform(r, t);
    cam.height = height;
    cam.width = width;
    cameras.push_back(cam);
  }
  return Rig(std::move(cameras));
}

RigidTransform ground_truth_camera_motion(const Rig& rig, int camera_id,
                                          const RigidTransform& body_t,
                                          const RigidTransform& body_tprime) {
  const RigidTransform& e = rig.camera(camera_id).extrinsics;
  return compose(inverse(compose(body_tprime, e)), compose(body_t, e));
}

namespace {

using nlohmann::json;

Vec3 vec3_field(const json& node, const std::string& file,
                const std::string& field) {
  if (!node.is_array() || node.size() != 3) {
    throw ParseError(file, field, "expected 3 numbers");
  }
  for (int i = 0; i < 3; ++i) {
    if (!node[i].is_number()) throw ParseError(file, field, "expected numbers");
  }
  return Vec3(node[0].get<double>(), node[1].get<double>(),
              node[2].get<double>());
}

}  // namespace

Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "", "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, "", e.what());
  }
  Scene scene;
  if (!doc.contains("primitives") || !doc["primitives"].is_array() ||
      doc["primitives"].empty()) {
    throw ParseError(path, "primitives", "expected a non-empty array");
  }
  const json& prims = doc["primitives"];
  for (size_t i = 0; i < prims.size(); ++i) {
    const std::string base = "primitives[" + std::to_string(i) + "]";
    const json& p = prims[i];
    const std::string type = p.value("type", "");
    if (type == "plane") {
      Plane plane;
      plane.normal = vec3_field(p.at("normal"), path, base + ".normal");
      const double norm = plane.normal.norm();
      if (norm < 1e-12) throw ParseError(path, base + ".normal", "zero normal");
      plane.normal /= norm;
      if (!p.contains("offset") || !p["offset"].is_number()) {
        throw ParseError(path, base + ".offset", "expected a number");
      }
      plane.offset = p["offset"].get<double>();
      scene.primitives.emplace_back(plane);
    } else if (type == "sphere") {
      Sphere sphere;
      sphere.center = vec3_field(p.at("center"), path, base + ".center");
      if (!p.contains("radius") || !p["radius"].is_number() ||
          !(p["radius"].get<double>() > 0.0)) {
        throw ParseError(path, base + ".radius", "expected a positive number");
      }
      sphere.radius = p["radius"].get<double>();
      scene.primitives.emplace_back(sphere);
    } else {
      throw ParseError(path, base + ".type", "expected 'plane' or 'sphere'");
    }
  }
  if (doc.contains("texture")) {
    const json& t = doc["texture"];
    scene.texture.frequency = t.value("frequency", scene.texture.frequency);
    scene.texture.amplitude = t.value("amplitude", scene.texture.amplitude);
    scene.texture.bias = t.value("bias", scene.texture.bias);
  }
  return scene;
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "", "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, "", e.what());
  }
  if (!doc.contains("poses") || !doc["poses"].is_array() ||
      doc["poses"].empty()) {
    throw ParseError(path, "poses", "expected a non-empty array");
  }
  Trajectory traj;
  const json& poses = doc["poses"];
  for (size_t i = 0; i < poses.size(); ++i) {
    const std::string base = "poses[" + std::to_string(i) + "]";
    const json& p = poses[i];
    if (!p.is_array() || p.size() != 16) {
      throw ParseError(path, base, "expected 16 row-major numbers");
    }
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (!p[r * 4 + c].is_number()) {
          throw ParseError(path, base, "expected numbers");
        }
        m(r, c) = p[r * 4 + c].get<double>();
      }
    }
    try {
      traj.poses.push_back(RigidTransform::from_matrix(m));
    } catch (const Error& e) {
      throw ParseError(path, base, e.what());
    }
  }
  return traj;
}

}  // namespace survgeo
