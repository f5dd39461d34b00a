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

#ifndef SURVGEO_SPATIAL_DEPTH_HPP
#define SURVGEO_SPATIAL_DEPTH_HPP

#include <string>

#include "survgeo/geometry.hpp"
#include "survgeo/raster.hpp"

namespace survgeo {

/// Cross-view depth reconstruction strategies. FW is geometrically correct
/// but leaves discretization holes; BW transports source-frame depth values
/// and is geometrically incorrect under translation (kept for comparison);
/// MBW transports target-frame z values via bilinear sampling; MFBW samples
/// source depth like BW, then re-projects and splats like FW.
enum class WarpStrategy { FW, BW, MBW, MFBW };

WarpStrategy parse_strategy(const std::string& name);
const char* strategy_name(WarpStrategy s);

/// Intrinsics of both views plus the transform taking source-camera points
/// into the target camera frame.
struct ViewPair {
  Intrinsics target;  // view the depth is reconstructed in
  Intrinsics source;  // view whose depth is transported
  RigidTransform target_from_source;
};

/// Dense depth in the target view reconstructed from an adjacent view.
/// Valid only where the reconstruction has support (overlap region for the
/// sampling strategies, hit pixels for the splatting ones); valid depths
/// are positive.
struct ReconstructedDepth {
  ScalarMap depth;
  WarpStrategy strategy = WarpStrategy::MBW;
};

/// Forward warping: lift every source pixel, transform into the target
/// frame, splat the z value at the nearest integer target pixel. Collisions
/// keep the smaller depth (z-buffer); unhit pixels stay invalid.
/// `target_shape` gives the output size as (height, width).
ReconstructedDepth reconstruct_fw(const ScalarMap& source_depth,
                                  const ViewPair& pair, int target_height,
                                  int target_width);

/// Backward warping: bilinear-sample the raw source depth map at the
/// correspondence coordinates computed from the target view's own depth.
ReconstructedDepth reconstruct_bw(const ScalarMap& source_depth,
                                  const ViewPair& pair,
                                  const ScalarMap& target_depth);

/// Modified backward warping: transform lifted source pixels into the
/// target frame, keep the z channel as a map over source pixels, and
/// bilinear-sample that map at the correspondence coordinates.
ReconstructedDepth reconstruct_mbw(const ScalarMap& source_depth,
                                   const ViewPair& pair,
                                   const ScalarMap& target_depth);

/// Modified forward+backward warping: sample the source depth at the
/// correspondence coordinates (BW), unproject that sample at the sampled
/// continuous source coordinate, transform, and splat like FW. The sampled
/// depths may correspond to interpolated 3D points.
ReconstructedDepth reconstruct_mfbw(const ScalarMap& source_depth,
                                    const ViewPair& pair,
                                    const ScalarMap& target_depth);

/// Dispatch by strategy. FW ignores `target_depth` (it may be null); the
/// other strategies require it.
ReconstructedDepth reconstruct(WarpStrategy strategy,
                               const ScalarMap& source_depth,
                               const ViewPair& pair,
                               const ScalarMap* target_depth,
                               int target_height, int target_width);

/// Internal hook for scale/shift studies: MBW with source depths read as
/// scale * d + shift in double precision.
ReconstructedDepth reconstruct_mbw_affine(const ScalarMap& source_depth,
                                          const ViewPair& pair,
                                          const ScalarMap& target_depth,
                                          double scale, double shift);

}  // namespace survgeo

#endif  // SURVGEO_SPATIAL_DEPTH_HPP
