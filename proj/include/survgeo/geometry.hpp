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

#ifndef SURVGEO_GEOMETRY_HPP
#define SURVGEO_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "survgeo/error.hpp"

namespace survgeo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Points at or behind this camera-plane depth are a projection error, not a
/// clamp; silent clamping would corrupt warping masks.
inline constexpr double kDepthEpsilon = 1e-6;

/// Pinhole intrinsics. Pixel coordinates are (u, v) = (column, row) with the
/// origin at the center of the top-left pixel.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  Intrinsics() = default;
  Intrinsics(double fx_, double fy_, double cx_, double cy_);
};

/// u = fx*x/z + cx, v = fy*y/z + cy. Throws NonPositiveDepth for points at
/// or behind the image plane (z <= kDepthEpsilon).
Vec2 project(const Intrinsics& k, const Vec3& point);

/// Lifts a pixel to the camera frame at the given depth (z = depth).
/// Throws NonPositiveDepth for depth <= 0.
Vec3 unproject(const Intrinsics& k, const Vec2& pixel, double depth);

/// Element of SE(3): orthonormal rotation (det +1) plus translation.
/// Immutable after construction; all operations are pure.
class RigidTransform {
 public:
  RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  /// Validates orthonormality and det(R) = +1 to 1e-9 per entry.
  RigidTransform(const Mat3& rotation, const Vec3& translation);

  static RigidTransform identity() { return RigidTransform(); }
  static RigidTransform from_matrix(const Mat4& m);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat4 matrix() const;

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }

 private:
  struct Unchecked {};
  RigidTransform(const Mat3& r, const Vec3& t, Unchecked)
      : rotation_(r), translation_(t) {}

  friend RigidTransform compose(const RigidTransform&, const RigidTransform&);
  friend RigidTransform inverse(const RigidTransform&);

  Mat3 rotation_;
  Vec3 translation_;
};

/// a then-after b: (a∘b)(x) = a(b(x)). Long chains are re-orthonormalized
/// (nearest rotation by polar decomposition) once drift exceeds 1e-7.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform inverse(const RigidTransform& t);

/// Max |R^T R - I| entry, used as the drift measure for renormalization.
double orthonormality_drift(const Mat3& r);

/// Nearest rotation matrix in the Frobenius sense.
Mat3 nearest_rotation(const Mat3& m);

/// Source frame for view synthesis: same camera at an adjacent time, an
/// adjacent camera at the same time, or an adjacent camera at an adjacent
/// time.
enum class ContextKind { Temporal, Spatial, SpatialTemporal };

const char* context_name(ContextKind kind);

struct Camera {
  int id = 0;  // 1-based, contiguous across the rig
  Intrinsics intrinsics;
  /// Maps camera coordinates to the shared body frame. The body frame is a
  /// calibration bookkeeping choice; see Rig.
  RigidTransform extrinsics;
  int height = 0;
  int width = 0;
};

/// A multi-camera rig. Extrinsics are fixed as body-from-camera, so the
/// transform taking points from camera i to camera j is E_j^-1 ∘ E_i.
class Rig {
 public:
  explicit Rig(std::vector<Camera> cameras);

  int size() const { return static_cast<int>(cameras_.size()); }
  const Camera& camera(int id) const;           // by 1-based id
  const Camera& at(int index) const { return cameras_[index]; }
  const std::vector<Camera>& cameras() const { return cameras_; }

  /// Camera-j-frame from camera-i-frame.
  RigidTransform camera_to_camera(int from_id, int to_id) const;

 private:
  std::vector<Camera> cameras_;  // sorted by id, ids are 1..N
};

/// Relative motion used to warp pixels of camera i into the source view j.
/// `poses` holds the per-camera motions T̂ for the t -> t' step, indexed by
/// camera id. Temporal context requires i == j (CameraMismatch otherwise).
RigidTransform context_transform(ContextKind kind, int camera_i, int camera_j,
                                 const Rig& rig,
                                 const std::vector<RigidTransform>& poses);

/// Loads a rig config (JSON). Schema: {"cameras": [{id, fx, fy, cx, cy,
/// height, width, extrinsics: 16 row-major numbers}]}. Throws ParseError
/// naming file and field.
Rig load_rig(const std::string& path);

/// Writes the same schema back out, deterministically.
void save_rig(const Rig& rig, const std::string& path);

}  // namespace survgeo

#endif  // SURVGEO_GEOMETRY_HPP
