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

#ifndef SURVGEO_PIPELINE_HPP
#define SURVGEO_PIPELINE_HPP

#include <optional>
#include <vector>

#include "survgeo/losses.hpp"
#include "survgeo/priors.hpp"

namespace survgeo {

/// Everything one camera contributes to a frame-instant evaluation.
struct CameraFrameData {
  ColorImage image;                         // target-time image
  std::vector<ColorImage> temporal_images;  // adjacent-time images
  ScalarMap depth;                          // estimated depth, target time
  /// Camera-frame motion per adjacent time, aligned with temporal_images.
  std::vector<RigidTransform> poses;
  std::optional<ScalarMap> raw_disparity;   // foundation-model inverse depth
  std::optional<Mask> occlusion;            // usable-pixel mask (static)
  std::vector<int> spatial_neighbors;       // adjacent camera ids
};

struct FrameSet {
  Rig rig;
  std::vector<CameraFrameData> cameras;  // index = camera id - 1

  FrameSet(Rig r, std::vector<CameraFrameData> cams);
};

/// Pooled photometric terms (pixel-level pooling across candidates and, when
/// accumulated, across target cameras). Optionals are absent when the frame
/// set carries no inputs for that context.
struct PhotometricSuite {
  std::optional<LossTerm> temporal;
  std::optional<LossTerm> spatial;
  std::optional<LossTerm> spatial_temporal;
  std::optional<LossTerm> mvrc;
};

/// Runs the four photometric contexts for one target camera, lifting pixels
/// with `lifting_depth` (the camera's own estimate, or a reconstructed
/// spatial dense depth whose mask restricts everything to the overlap).
PhotometricSuite photometric_suite(const FrameSet& frames, int target_id,
                                   const ScalarMap& lifting_depth,
                                   double alpha);

/// The reconstruction-consistency composite: photometric contexts recomputed
/// with each neighbor's depth reprojected into the target view, weighted by
/// the same context mix. Pools over target cameras and neighbors.
double src(const FrameSet& frames, WarpStrategy strategy,
           const LossWeights& weights);

struct FrameLossResult {
  LossReport report;
  /// Diagnostic, not part of the weighted total; absent for single-camera
  /// rigs or when no poses are given.
  std::optional<PoseConsistencyResult> pose_consistency;
};

/// Evaluates every loss the frame set supports and assembles the weighted
/// total. `strategy` drives the depth reconstruction used by the sdc and
/// src terms; the spatial normal-consistency prior always uses modified
/// backward warping (the only route that keeps scale-ambiguous priors
/// usable). Terms whose inputs are structurally absent stay absent and
/// raise MissingTerm if weighted.
FrameLossResult compute_frame_losses(const FrameSet& frames,
                                     const LossWeights& weights,
                                     WarpStrategy strategy,
                                     const PseudoDepthConfig& pseudo_cfg);

}  // namespace survgeo

#endif  // SURVGEO_PIPELINE_HPP
