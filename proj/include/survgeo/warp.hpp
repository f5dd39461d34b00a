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

#ifndef SURVGEO_WARP_HPP
#define SURVGEO_WARP_HPP

#include "survgeo/geometry.hpp"
#include "survgeo/raster.hpp"

namespace survgeo {

/// View synthesis output: the resampled source image, the coordinates it was
/// sampled at, and the combined validity (lifting validity, positive
/// transformed depth, in-bounds sampling footprint, optional occlusion
/// masks). Invalid pixels are zero-filled and must never enter reductions.
struct WarpResult {
  ColorImage synthesized;
  CoordGrid coords;
  Mask validity;
};

/// Per-pixel reprojection: lift each valid target pixel with its depth,
/// apply `target_to_source`, project with the source intrinsics. Pixels
/// whose transformed depth is <= kDepthEpsilon are invalid.
CoordGrid warp_coords(const ScalarMap& depth, const Intrinsics& k_target,
                      const Intrinsics& k_source,
                      const RigidTransform& target_to_source);

/// Samples the source image at `coords`. Validity intersects the coordinate
/// validity, the sampling footprint, an optional source-side occlusion mask
/// (applied while sampling) and an optional target-side occlusion mask.
WarpResult synthesize(const ColorImage& source, const CoordGrid& coords,
                      const Mask* source_occlusion = nullptr,
                      const Mask* target_occlusion = nullptr);

}  // namespace survgeo

#endif  // SURVGEO_WARP_HPP
