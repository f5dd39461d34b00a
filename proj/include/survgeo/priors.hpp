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

#ifndef SURVGEO_PRIORS_HPP
#define SURVGEO_PRIORS_HPP

#include <array>

#include "survgeo/geometry.hpp"
#include "survgeo/raster.hpp"
#include "survgeo/spatial_depth.hpp"

namespace survgeo {

/// Target clipping range for pseudo depth recovered from normalized
/// disparity. Defaults: 200 m evaluation ceiling, 0.1 m conventional near
/// plane.
struct PseudoDepthConfig {
  double d_min = 0.1;
  double d_max = 200.0;

  PseudoDepthConfig() = default;
  PseudoDepthConfig(double min_depth, double max_depth);
};

/// Min-max normalizes a raw inverse-depth map (killing any affine scale and
/// shift of the input) and maps it onto [d_min, d_max]:
///   S̄ = (S - min) / (max - min)
///   D = 1 / (1/d_max + (1/d_min - 1/d_max) * S̄)
/// The output decreases strictly with the raw disparity. Computed in double;
/// throws ConstantMap when max == min, AllInvalid when nothing is valid.
ScalarMap pseudo_depth(const ScalarMap& raw_disparity,
                       const PseudoDepthConfig& cfg);

/// The four ordered neighbor-offset pairs used for normal estimation. Each
/// pair's offsets are perpendicular and counterclockwise on screen (v grows
/// downward). Default: east/north, north/west, west/south, south/east.
struct NeighborPairs {
  struct Offset {
    int du;
    int dv;
  };
  std::array<std::array<Offset, 2>, 4> pairs;

  /// Validates perpendicularity and counterclockwise orientation of every
  /// pair and that offsets stay in the 8-neighborhood.
  explicit NeighborPairs(
      const std::array<std::array<Offset, 2>, 4>& pairs_in);

  static NeighborPairs standard();
};

/// Unit surface normals from depth: lift the pixel and both offsets of each
/// pair, take the normalized cross product of the two offset vectors, align
/// all four with the first pair's direction (sign of the inner product, with
/// sgn(0) := +1), average, and renormalize. Scale of the depth map cancels
/// exactly. The one-pixel border is invalid; a pixel becomes invalid when a
/// needed neighbor is invalid or a cross product has norm < 1e-12
/// (degenerate surface).
VectorMap normal_map(const ScalarMap& depth, const Intrinsics& k,
                     const NeighborPairs& pairs = NeighborPairs::standard());

/// normal_map of `scale * depth` evaluated in double precision, so exact
/// scale cancellation can be verified without float32 rounding of the input.
VectorMap normal_map_scaled(const ScalarMap& depth, const Intrinsics& k,
                            double scale,
                            const NeighborPairs& pairs =
                                NeighborPairs::standard());

/// Normals of a depth map reconstructed from an adjacent view. Identical
/// arithmetic to normal_map; with reconstructed pseudo depth the residual
/// shift only enters at first order in the neighbor spacing, so the result
/// is usable as a scale/shift-robust prior.
VectorMap spatial_normal_map(const ReconstructedDepth& reconstructed,
                             const Intrinsics& k_target,
                             const NeighborPairs& pairs =
                                 NeighborPairs::standard());

}  // namespace survgeo

#endif  // SURVGEO_PRIORS_HPP
