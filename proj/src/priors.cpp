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

#include "survgeo/priors.hpp"

#include <cmath>
#include <limits>

#include "survgeo/parallel.hpp"

namespace survgeo {

PseudoDepthConfig::PseudoDepthConfig(double min_depth, double max_depth)
    : d_min(min_depth), d_max(max_depth) {
  if (!(0.0 < d_min) || !(d_min < d_max)) {
    throw Error(Errc::InvalidArgument,
                "pseudo-depth range needs 0 < d_min < d_max");
  }
}

ScalarMap pseudo_depth(const ScalarMap& raw, const PseudoDepthConfig& cfg) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw.mask[i]) continue;
    const double v = static_cast<double>(raw.data[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  }
  if (count == 0) {
    throw Error(Errc::AllInvalid, "no valid disparity pixels");
  }
  if (!(hi > lo)) {
    throw Error(Errc::ConstantMap,
                "disparity min-max normalization is degenerate");
  }
  const double range = hi - lo;
  const double disp_min = 1.0 / cfg.d_max;
  const double disp_max = 1.0 / cfg.d_min;
  const double disp_range = disp_max - disp_min;
  ScalarMap out(raw.height, raw.width, 0.0f, false);
  out.mask = raw.mask;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw.mask[i]) continue;
    const double normalized = (static_cast<double>(raw.data[i]) - lo) / range;
    out.data[i] =
        static_cast<float>(1.0 / (disp_min + disp_range * normalized));
  }
  return out;
}

namespace {

int cross2_screen(const NeighborPairs::Offset& a,
                  const NeighborPairs::Offset& b) {
  // v grows downward; flip it so "counterclockwise" means what it does on
  // screen.
  return a.du * (-b.dv) - (-a.dv) * b.du;
}

}  // namespace

NeighborPairs::NeighborPairs(
    const std::array<std::array<Offset, 2>, 4>& pairs_in)
    : pairs(pairs_in) {
  int orientation = 0;
  for (const auto& pair : pairs) {
    for (const Offset& o : pair) {
      if (o.du < -1 || o.du > 1 || o.dv < -1 || o.dv > 1 ||
          (o.du == 0 && o.dv == 0)) {
        throw Error(Errc::InvalidArgument,
                    "offsets must come from the 8-neighborhood");
      }
    }
    if (pair[0].du * pair[1].du + pair[0].dv * pair[1].dv != 0) {
      throw Error(Errc::InvalidArgument, "pair offsets must be perpendicular");
    }
    // Consistent winding across all pairs; globally reversed orderings are
    // allowed so the sign-flip closure is expressible.
    const int cross = cross2_screen(pair[0], pair[1]);
    if (orientation == 0) orientation = cross > 0 ? 1 : -1;
    if (cross * orientation <= 0) {
      throw Error(Errc::InvalidArgument,
                  "pair orderings must share one winding direction");
    }
  }
}

NeighborPairs NeighborPairs::standard() {
  const Offset e{1, 0}, n{0, -1}, w{-1, 0}, s{0, 1};
  return NeighborPairs({{{{e, n}}, {{n, w}}, {{w, s}}, {{s, e}}}});
}

namespace {

constexpr double kDegenerateCross = 1e-12;

struct LiftedPixel {
  double x, y, z;
  bool ok;
};

}  // namespace

VectorMap normal_map_scaled(const ScalarMap& depth, const Intrinsics& k,
                            double scale, const NeighborPairs& pairs) {
  if (depth.height < 3 || depth.width < 3) {
    throw Error(Errc::DegenerateSize, "normal map needs at least 3x3");
  }
  if (!(scale > 0.0)) {
    throw Error(Errc::InvalidArgument, "depth scale must be positive");
  }
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (depth.mask[i] && !(depth.data[i] > 0.0f)) {
      throw Error(Errc::NonPositiveDepth, "normals need positive depths");
    }
  }
  VectorMap normals(depth.height, depth.width);
  normals.unit_norm = true;

  auto lift = [&](int y, int x) -> LiftedPixel {
    if (!depth.valid(y, x)) return {0.0, 0.0, 0.0, false};
    const double d = scale * static_cast<double>(depth.at(y, x));
    return {(x - k.cx) / k.fx * d, (y - k.cy) / k.fy * d, d, true};
  };

  parallel_rows(depth.height, [&](int y) {
    if (y == 0 || y == depth.height - 1) return;
    for (int x = 1; x < depth.width - 1; ++x) {
      const LiftedPixel center = lift(y, x);
      if (!center.ok) continue;
      double acc[3] = {0.0, 0.0, 0.0};
      double first[3] = {0.0, 0.0, 0.0};
      bool pixel_ok = true;
      for (std::size_t j = 0; j < pairs.pairs.size() && pixel_ok; ++j) {
        const auto& pair = pairs.pairs[j];
        const LiftedPixel p0 = lift(y + pair[0].dv, x + pair[0].du);
        const LiftedPixel p1 = lift(y + pair[1].dv, x + pair[1].du);
        if (!p0.ok || !p1.ok) {
          pixel_ok = false;
          break;
        }
        const double ax = p0.x - center.x;
        const double ay = p0.y - center.y;
        const double az = p0.z - center.z;
        const double bx = p1.x - center.x;
        const double by = p1.y - center.y;
        const double bz = p1.z - center.z;
        double nx = ay * bz - az * by;
        double ny = az * bx - ax * bz;
        double nz = ax * by - ay * bx;
        const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (norm < kDegenerateCross) {
          pixel_ok = false;  // degenerate surface patch
          break;
        }
        nx /= norm;
        ny /= norm;
        nz /= norm;
        if (j == 0) {
          first[0] = nx;
          first[1] = ny;
          first[2] = nz;
        }
        const double dot = first[0] * nx + first[1] * ny + first[2] * nz;
        const double sign = dot < 0.0 ? -1.0 : 1.0;  // sgn(0) := +1
        acc[0] += sign * nx;
        acc[1] += sign * ny;
        acc[2] += sign * nz;
      }
      if (!pixel_ok) continue;
      acc[0] *= 0.25;
      acc[1] *= 0.25;
      acc[2] *= 0.25;
      // The average of unit vectors is not unit; renormalize since the
      // consistency loss is stated for unit normals.
      const double norm =
          std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
      if (norm < kDegenerateCross) continue;
      normals.at(y, x, 0) = static_cast<float>(acc[0] / norm);
      normals.at(y, x, 1) = static_cast<float>(acc[1] / norm);
      normals.at(y, x, 2) = static_cast<float>(acc[2] / norm);
      normals.mask[static_cast<std::size_t>(y) * depth.width + x] = 1;
    }
  });
  return normals;
}

VectorMap normal_map(const ScalarMap& depth, const Intrinsics& k,
                     const NeighborPairs& pairs) {
  return normal_map_scaled(depth, k, 1.0, pairs);
}

VectorMap spatial_normal_map(const ReconstructedDepth& reconstructed,
                             const Intrinsics& k_target,
                             const NeighborPairs& pairs) {
  return normal_map_scaled(reconstructed.depth, k_target, 1.0, pairs);
}

}  // namespace survgeo
