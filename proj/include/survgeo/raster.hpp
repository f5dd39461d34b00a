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

#ifndef SURVGEO_RASTER_HPP
#define SURVGEO_RASTER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "survgeo/error.hpp"

namespace survgeo {

using Mask = std::vector<std::uint8_t>;  // 1 = valid, 0 = excluded

/// Row-major single-channel grid of 32-bit reals with a validity mask.
/// Invalid pixels never enter reductions; reductions accumulate in 64-bit,
/// sequentially in row-major order, so results are thread-count independent.
struct ScalarMap {
  int height = 0;
  int width = 0;
  std::vector<float> data;
  Mask mask;

  ScalarMap() = default;
  ScalarMap(int h, int w, float fill = 0.0f, bool valid = true);

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  float at(int y, int x) const { return data[index(y, x)]; }
  float& at(int y, int x) { return data[index(y, x)]; }
  bool valid(int y, int x) const { return mask[index(y, x)] != 0; }
  std::size_t size() const { return data.size(); }
};

/// Interleaved RGB image, values in [0, 1]. All pixels carry values;
/// validity of derived content travels in separate masks.
struct ColorImage {
  int height = 0;
  int width = 0;
  std::vector<float> data;  // 3 * height * width, rgb interleaved

  ColorImage() = default;
  ColorImage(int h, int w, float r = 0.0f, float g = 0.0f, float b = 0.0f);

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * 3 + c;
  }
  float at(int y, int x, int c) const { return data[index(y, x, c)]; }
  float& at(int y, int x, int c) { return data[index(y, x, c)]; }
};

/// Three-channel field of unbounded reals (planar per-pixel triples) with a
/// validity mask. When `unit_norm` is set, valid pixels hold unit vectors
/// (within 1e-6).
struct VectorMap {
  int height = 0;
  int width = 0;
  std::vector<float> data;  // 3 * height * width, xyz interleaved
  Mask mask;
  bool unit_norm = false;

  VectorMap() = default;
  VectorMap(int h, int w);

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * 3 + c;
  }
  float at(int y, int x, int c) const { return data[index(y, x, c)]; }
  float& at(int y, int x, int c) { return data[index(y, x, c)]; }
  bool valid(int y, int x) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Per-pixel continuous sampling coordinates (u = column, v = row) with a
/// validity flag per pixel. Stored in double so warp round-trips are not
/// limited by storage precision.
struct CoordGrid {
  int height = 0;
  int width = 0;
  std::vector<double> u;
  std::vector<double> v;
  Mask valid;

  CoordGrid() = default;
  CoordGrid(int h, int w);

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  /// u(x) = x, v(y) = y everywhere, all valid.
  static CoordGrid identity(int h, int w);
};

/// Bilinear sample of `src` at `coords`. A result pixel is valid iff its
/// coordinate is valid, every source pixel touched with nonzero weight lies
/// inside the source, and all touched pixels are source-valid. Neighbors
/// with exactly zero weight (integer coordinates) are not touched, so an
/// identity grid reproduces the source bit-exactly at all valid pixels.
/// Invalid output pixels are filled with 0.
ScalarMap bilinear_sample(const ScalarMap& src, const CoordGrid& coords);

/// ColorImage variant. `src_valid`, when given, marks source pixels that may
/// be sampled (e.g. a per-camera self-occlusion mask).
std::pair<ColorImage, Mask> bilinear_sample(const ColorImage& src,
                                            const CoordGrid& coords,
                                            const Mask* src_valid = nullptr);

/// Forward differences; the last column (for d/du) and last row (for d/dv)
/// are zero. A gradient pixel is valid iff both pixels it reads are valid
/// (the zero-padded edge only needs the pixel itself). Throws DegenerateSize
/// if either dimension is < 2.
std::pair<ScalarMap, ScalarMap> gradient(const ScalarMap& m);

/// d = D^-1 / mean(D^-1) over valid pixels; the result has mean 1 and is
/// invariant under D -> c*D. Throws NonPositiveDepth on any valid pixel
/// <= 0 and AllInvalid when no pixel is valid.
ScalarMap mean_normalized_inverse(const ScalarMap& depth);

/// Internal double-precision variant: values are scaled by `scale` before
/// inversion, so scale invariance can be checked without float32 rounding.
ScalarMap mean_normalized_inverse_scaled(const ScalarMap& depth, double scale);

struct Reduction {
  double sum = 0.0;
  std::int64_t count = 0;
  double mean() const { return count > 0 ? sum / count : 0.0; }
};

/// Sequential row-major masked sum in double precision.
Reduction masked_sum(const ScalarMap& m);

/// Pixels valid in both masks.
Mask mask_and(const Mask& a, const Mask& b);
std::int64_t mask_count(const Mask& m);

/// A pixel survives iff every pixel of its reflect-padded 3x3 window is
/// valid. Matches the SSIM window, which reflects across borders, so border
/// pixels only depend on in-image neighbors.
Mask erode3x3_reflect(const Mask& m, int height, int width);

}  // namespace survgeo

#endif  // SURVGEO_RASTER_HPP
