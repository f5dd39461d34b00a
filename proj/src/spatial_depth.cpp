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

#include "survgeo/spatial_depth.hpp"

#include <cmath>
#include <limits>

#include "survgeo/warp.hpp"

namespace survgeo {

namespace {

void check_shape(int h, int w) {
  if (h <= 0 || w <= 0) {
    throw Error(Errc::DegenerateSize, "target shape must be positive");
  }
}

/// Correspondence coordinates of target pixels in the source view.
CoordGrid correspondence(const ViewPair& pair, const ScalarMap& target_depth) {
  return warp_coords(target_depth, pair.target, pair.source,
                     inverse(pair.target_from_source));
}

void splat_min(ScalarMap& out, double u, double v, double z) {
  const long xi = std::lround(u);
  const long yi = std::lround(v);
  if (xi < 0 || yi < 0 || xi >= out.width || yi >= out.height) return;
  const std::size_t i = out.index(static_cast<int>(yi), static_cast<int>(xi));
  const float zf = static_cast<float>(z);
  if (!out.mask[i] || zf < out.data[i]) {
    out.data[i] = zf;
    out.mask[i] = 1;
  }
}

}  // namespace

WarpStrategy parse_strategy(const std::string& name) {
  if (name == "fw") return WarpStrategy::FW;
  if (name == "bw") return WarpStrategy::BW;
  if (name == "mbw") return WarpStrategy::MBW;
  if (name == "mfbw") return WarpStrategy::MFBW;
  throw Error(Errc::InvalidArgument, "unknown strategy '" + name + "'");
}

const char* strategy_name(WarpStrategy s) {
  switch (s) {
    case WarpStrategy::FW: return "fw";
    case WarpStrategy::BW: return "bw";
    case WarpStrategy::MBW: return "mbw";
    case WarpStrategy::MFBW: return "mfbw";
  }
  return "unknown";
}

ReconstructedDepth reconstruct_fw(const ScalarMap& source_depth,
                                  const ViewPair& pair, int target_height,
                                  int target_width) {
  check_shape(target_height, target_width);
  ScalarMap out(target_height, target_width, 0.0f, false);
  const Mat3& r = pair.target_from_source.rotation();
  const Vec3& t = pair.target_from_source.translation();
  // Serial splat: z-min is order independent, so output does not depend on
  // traversal order anyway.
  for (int y = 0; y < source_depth.height; ++y) {
    for (int x = 0; x < source_depth.width; ++x) {
      if (!source_depth.valid(y, x)) continue;
      const double d = static_cast<double>(source_depth.at(y, x));
      if (!(d > 0.0)) continue;
      const Vec3 lifted((x - pair.source.cx) / pair.source.fx * d,
                        (y - pair.source.cy) / pair.source.fy * d, d);
      const Vec3 p = r * lifted + t;
      if (!(p.z() > kDepthEpsilon)) continue;
      const double u = pair.target.fx * p.x() / p.z() + pair.target.cx;
      const double v = pair.target.fy * p.y() / p.z() + pair.target.cy;
      splat_min(out, u, v, p.z());
    }
  }
  return {std::move(out), WarpStrategy::FW};
}

ReconstructedDepth reconstruct_bw(const ScalarMap& source_depth,
                                  const ViewPair& pair,
                                  const ScalarMap& target_depth) {
  const CoordGrid coords = correspondence(pair, target_depth);
  ScalarMap out = bilinear_sample(source_depth, coords);
  return {std::move(out), WarpStrategy::BW};
}

ReconstructedDepth reconstruct_mbw(const ScalarMap& source_depth,
                                   const ViewPair& pair,
                                   const ScalarMap& target_depth) {
  return reconstruct_mbw_affine(source_depth, pair, target_depth, 1.0, 0.0);
}

ReconstructedDepth reconstruct_mbw_affine(const ScalarMap& source_depth,
                                          const ViewPair& pair,
                                          const ScalarMap& target_depth,
                                          double scale, double shift) {
  // z of the transformed lifted source points, as a map over source pixels.
  ScalarMap z_map(source_depth.height, source_depth.width, 0.0f, false);
  const Mat3& r = pair.target_from_source.rotation();
  const Vec3& t = pair.target_from_source.translation();
  for (int y = 0; y < source_depth.height; ++y) {
    for (int x = 0; x < source_depth.width; ++x) {
      if (!source_depth.valid(y, x)) continue;
      const double d =
          scale * static_cast<double>(source_depth.at(y, x)) + shift;
      if (!(d > 0.0)) continue;
      const Vec3 lifted((x - pair.source.cx) / pair.source.fx * d,
                        (y - pair.source.cy) / pair.source.fy * d, d);
      const double z = r.row(2).dot(lifted) + t.z();
      if (!(z > kDepthEpsilon)) continue;
      z_map.at(y, x) = static_cast<float>(z);
      z_map.mask[z_map.index(y, x)] = 1;
    }
  }
  const CoordGrid coords = correspondence(pair, target_depth);
  ScalarMap out = bilinear_sample(z_map, coords);
  return {std::move(out), WarpStrategy::MBW};
}

ReconstructedDepth reconstruct_mfbw(const ScalarMap& source_depth,
                                    const ViewPair& pair,
                                    const ScalarMap& target_depth) {
  const CoordGrid coords = correspondence(pair, target_depth);
  const ScalarMap sampled = bilinear_sample(source_depth, coords);
  ScalarMap out(target_depth.height, target_depth.width, 0.0f, false);
  const Mat3& r = pair.target_from_source.rotation();
  const Vec3& t = pair.target_from_source.translation();
  for (int y = 0; y < sampled.height; ++y) {
    for (int x = 0; x < sampled.width; ++x) {
      const std::size_t i = sampled.index(y, x);
      if (!sampled.mask[i]) continue;
      const double d = static_cast<double>(sampled.data[i]);
      if (!(d > 0.0)) continue;
      // Unproject at the continuous source coordinate the sample came from;
      // the result may be an interpolated point that exists on no surface.
      const Vec3 lifted((coords.u[i] - pair.source.cx) / pair.source.fx * d,
                        (coords.v[i] - pair.source.cy) / pair.source.fy * d,
                        d);
      const Vec3 p = r * lifted + t;
      if (!(p.z() > kDepthEpsilon)) continue;
      const double u = pair.target.fx * p.x() / p.z() + pair.target.cx;
      const double v = pair.target.fy * p.y() / p.z() + pair.target.cy;
      splat_min(out, u, v, p.z());
    }
  }
  return {std::move(out), WarpStrategy::MFBW};
}

ReconstructedDepth reconstruct(WarpStrategy strategy,
                               const ScalarMap& source_depth,
                               const ViewPair& pair,
                               const ScalarMap* target_depth,
                               int target_height, int target_width) {
  if (strategy == WarpStrategy::FW) {
    return reconstruct_fw(source_depth, pair, target_height, target_width);
  }
  if (target_depth == nullptr) {
    throw Error(Errc::InvalidArgument,
                std::string(strategy_name(strategy)) +
                    " reconstruction needs the target view's depth");
  }
  switch (strategy) {
    case WarpStrategy::BW:
      return reconstruct_bw(source_depth, pair, *target_depth);
    case WarpStrategy::MBW:
      return reconstruct_mbw(source_depth, pair, *target_depth);
    case WarpStrategy::MFBW:
      return reconstruct_mfbw(source_depth, pair, *target_depth);
    default:
      throw Error(Errc::InvalidArgument, "unknown strategy");
  }
}

}  // namespace survgeo
