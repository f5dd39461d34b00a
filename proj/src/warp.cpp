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

#include "survgeo/warp.hpp"

#include "survgeo/parallel.hpp"

namespace survgeo {

CoordGrid warp_coords(const ScalarMap& depth, const Intrinsics& k_target,
                      const Intrinsics& k_source,
                      const RigidTransform& target_to_source) {
  CoordGrid grid(depth.height, depth.width);
  const Mat3& r = target_to_source.rotation();
  const Vec3& t = target_to_source.translation();
  parallel_rows(depth.height, [&](int y) {
    for (int x = 0; x < depth.width; ++x) {
      const std::size_t i = grid.index(y, x);
      if (!depth.mask[i]) continue;
      const double d = static_cast<double>(depth.data[i]);
      if (!(d > 0.0)) continue;
      const Vec3 lifted((x - k_target.cx) / k_target.fx * d,
                        (y - k_target.cy) / k_target.fy * d, d);
      const Vec3 p = r * lifted + t;
      if (!(p.z() > kDepthEpsilon)) continue;
      grid.u[i] = k_source.fx * p.x() / p.z() + k_source.cx;
      grid.v[i] = k_source.fy * p.y() / p.z() + k_source.cy;
      grid.valid[i] = 1;
    }
  });
  return grid;
}

WarpResult synthesize(const ColorImage& source, const CoordGrid& coords,
                      const Mask* source_occlusion,
                      const Mask* target_occlusion) {
  WarpResult result;
  auto [image, sample_valid] =
      bilinear_sample(source, coords, source_occlusion);
  result.synthesized = std::move(image);
  result.validity = std::move(sample_valid);
  if (target_occlusion != nullptr) {
    result.validity = mask_and(result.validity, *target_occlusion);
    // re-zero pixels the target mask removed
    for (std::size_t i = 0; i < result.validity.size(); ++i) {
      if (!result.validity[i]) {
        result.synthesized.data[3 * i] = 0.0f;
        result.synthesized.data[3 * i + 1] = 0.0f;
        result.synthesized.data[3 * i + 2] = 0.0f;
      }
    }
  }
  result.coords = coords;
  return result;
}

}  // namespace survgeo
