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

#ifndef SURVGEO_MOTION_HPP
#define SURVGEO_MOTION_HPP

#include <functional>
#include <string>
#include <vector>

#include "survgeo/feature_stack.hpp"
#include "survgeo/geometry.hpp"

namespace survgeo {

/// Decodes one C x h x w feature block into a rigid motion. Must be
/// deterministic and reentrant. `features` points at per_camera() floats.
using PoseDecoder =
    std::function<RigidTransform(const float* features, int channels,
                                 int height, int width)>;

/// Maps a pooled C-vector to N view logits. Deterministic and reentrant.
using ViewWeigher =
    std::function<std::vector<double>(const std::vector<double>& pooled)>;

/// Reference decoder: global average pool, affine map to a 6-vector
/// (axis-angle rotation then translation), exponentiated to SE(3). The
/// rotation uses the closed Rodrigues form with the series expansion below
/// 1e-8 rad.
class AffinePoseDecoder {
 public:
  /// `weight` is 6 x channels row-major, `bias` has 6 entries.
  AffinePoseDecoder(std::vector<double> weight, std::vector<double> bias,
                    int channels);

  RigidTransform operator()(const float* features, int channels, int height,
                            int width) const;

  int channels() const { return channels_; }

 private:
  std::vector<double> weight_;
  std::vector<double> bias_;
  int channels_;
};

/// Reference weigher: a single affine map, N x channels plus N biases.
class AffineViewWeigher {
 public:
  AffineViewWeigher(std::vector<double> weight, std::vector<double> bias,
                    int channels, int views);

  std::vector<double> operator()(const std::vector<double>& pooled) const;

 private:
  std::vector<double> weight_;
  std::vector<double> bias_;
  int channels_;
  int views_;
};

/// Loads an affine decoder/weigher from a JSON metadata file referencing
/// PFM weight and bias matrices (paths relative to the metadata file).
AffinePoseDecoder load_pose_decoder(const std::string& meta_path);
AffineViewWeigher load_view_weigher(const std::string& meta_path);

/// Rotation exponential (axis-angle 3-vector to matrix).
Mat3 so3_exp(const Vec3& axis_angle);

/// softmax(xi(mean over cameras of spatially pooled features)); strictly
/// positive, sums to 1, and shifting all logits by a constant changes
/// nothing.
std::vector<double> adaptive_weights(const FeatureStack& f,
                                     const ViewWeigher& xi);

// Motion strategies. Each returns one camera-frame motion per camera,
// indexed by camera id - 1. Decoded motions are interpreted in the reference
// (first) camera's frame and distributed through the extrinsics as
//   T_i = (E_i^-1 E_1) M (E_1^-1 E_i),
// which makes every strategy independent of the arbitrary body-frame choice
// and reduces to plain extrinsics conjugation when the body frame is the
// front camera.

/// Decode from the weight-blended feature sum.
std::vector<RigidTransform> adaptive_joint_motion(const FeatureStack& f,
                                                  const ViewWeigher& xi,
                                                  const PoseDecoder& decoder,
                                                  const Rig& rig);

/// Uniform 1/N blend.
std::vector<RigidTransform> joint_motion(const FeatureStack& f,
                                         const PoseDecoder& decoder,
                                         const Rig& rig);

/// Decode from the front camera's features, or from the uniform aggregate
/// when `use_all_features` is set.
std::vector<RigidTransform> front_motion(const FeatureStack& f,
                                         const PoseDecoder& decoder,
                                         const Rig& rig,
                                         bool use_all_features);

/// Fully independent per-camera decoding; no cross-view coupling.
std::vector<RigidTransform> per_camera_motion(const FeatureStack& f,
                                              const PoseDecoder& decoder);

}  // namespace survgeo

#endif  // SURVGEO_MOTION_HPP
