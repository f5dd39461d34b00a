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

#include "survgeo/raster.hpp"

#include <cmath>

#include "survgeo/parallel.hpp"

namespace survgeo {

namespace {

void check_positive_dims(int h, int w) {
  if (h <= 0 || w <= 0) {
    throw Error(Errc::DegenerateSize, "map dimensions must be positive");
  }
}

inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

struct SampleWeights {
  int x0, y0;
  double fu, fv;
  bool needs_x1, needs_y1;
  bool in_bounds;
};

// Coordinates within this distance of an integer snap to it, so warps that
// are algebraically the identity keep zero-weight footprints despite
// floating-point round-off in the lift/project chain.
constexpr double kCoordSnap = 1e-9;

inline SampleWeights sample_weights(double u, double v, int height,
                                    int width) {
  SampleWeights s{};
  const double ru = std::round(u);
  const double rv = std::round(v);
  if (std::abs(u - ru) < kCoordSnap) u = ru;
  if (std::abs(v - rv) < kCoordSnap) v = rv;
  const double fu0 = std::floor(u);
  const double fv0 = std::floor(v);
  s.x0 = static_cast<int>(fu0);
  s.y0 = static_cast<int>(fv0);
  s.fu = u - fu0;
  s.fv = v - fv0;
  s.needs_x1 = s.fu > 0.0;
  s.needs_y1 = s.fv > 0.0;
  s.in_bounds = s.x0 >= 0 && s.y0 >= 0 &&
                (s.needs_x1 ? s.x0 + 1 <= width - 1 : s.x0 <= width - 1) &&
                (s.needs_y1 ? s.y0 + 1 <= height - 1 : s.y0 <= height - 1);
  return s;
}

}  // namespace

ScalarMap::ScalarMap(int h, int w, float fill, bool valid)
    : height(h), width(w) {
  check_positive_dims(h, w);
  data.assign(static_cast<std::size_t>(h) * w, fill);
  mask.assign(data.size(), valid ? 1 : 0);
}

ColorImage::ColorImage(int h, int w, float r, float g, float b)
    : height(h), width(w) {
  check_positive_dims(h, w);
  data.resize(static_cast<std::size_t>(h) * w * 3);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }
}

VectorMap::VectorMap(int h, int w) : height(h), width(w) {
  check_positive_dims(h, w);
  data.assign(static_cast<std::size_t>(h) * w * 3, 0.0f);
  mask.assign(static_cast<std::size_t>(h) * w, 0);
}

CoordGrid::CoordGrid(int h, int w) : height(h), width(w) {
  check_positive_dims(h, w);
  const std::size_t n = static_cast<std::size_t>(h) * w;
  u.assign(n, 0.0);
  v.assign(n, 0.0);
  valid.assign(n, 0);
}

CoordGrid CoordGrid::identity(int h, int w) {
  CoordGrid g(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = g.index(y, x);
      g.u[i] = x;
      g.v[i] = y;
      g.valid[i] = 1;
    }
  }
  return g;
}

ScalarMap bilinear_sample(const ScalarMap& src, const CoordGrid& coords) {
  ScalarMap out(coords.height, coords.width, 0.0f, false);
  parallel_rows(coords.height, [&](int y) {
    for (int x = 0; x < coords.width; ++x) {
      const std::size_t i = coords.index(y, x);
      if (!coords.valid[i] || !std::isfinite(coords.u[i]) ||
          !std::isfinite(coords.v[i])) {
        continue;
      }
      const SampleWeights s =
          sample_weights(coords.u[i], coords.v[i], src.height, src.width);
      if (!s.in_bounds) continue;
      const int x1 = s.needs_x1 ? s.x0 + 1 : s.x0;
      const int y1 = s.needs_y1 ? s.y0 + 1 : s.y0;
      if (!src.valid(s.y0, s.x0) || !src.valid(s.y0, x1) ||
          !src.valid(y1, s.x0) || !src.valid(y1, x1)) {
        continue;
      }
      const double w00 = (1.0 - s.fu) * (1.0 - s.fv);
      const double w10 = s.fu * (1.0 - s.fv);
      const double w01 = (1.0 - s.fu) * s.fv;
      const double w11 = s.fu * s.fv;
      double value = w00 * src.at(s.y0, s.x0);
      if (s.needs_x1) value += w10 * src.at(s.y0, x1);
      if (s.needs_y1) value += w01 * src.at(y1, s.x0);
      if (s.needs_x1 && s.needs_y1) value += w11 * src.at(y1, x1);
      out.data[i] = static_cast<float>(value);
      out.mask[i] = 1;
    }
  });
  return out;
}

std::pair<ColorImage, Mask> bilinear_sample(const ColorImage& src,
                                            const CoordGrid& coords,
                                            const Mask* src_valid) {
  ColorImage out(coords.height, coords.width);
  Mask valid(static_cast<std::size_t>(coords.height) * coords.width, 0);
  auto source_ok = [&](int y, int x) {
    return src_valid == nullptr ||
           (*src_valid)[static_cast<std::size_t>(y) * src.width + x] != 0;
  };
  parallel_rows(coords.height, [&](int y) {
    for (int x = 0; x < coords.width; ++x) {
      const std::size_t i = coords.index(y, x);
      if (!coords.valid[i] || !std::isfinite(coords.u[i]) ||
          !std::isfinite(coords.v[i])) {
        continue;
      }
      const SampleWeights s =
          sample_weights(coords.u[i], coords.v[i], src.height, src.width);
      if (!s.in_bounds) continue;
      const int x1 = s.needs_x1 ? s.x0 + 1 : s.x0;
      const int y1 = s.needs_y1 ? s.y0 + 1 : s.y0;
      if (!source_ok(s.y0, s.x0) || !source_ok(s.y0, x1) ||
          !source_ok(y1, s.x0) || !source_ok(y1, x1)) {
        continue;
      }
      const double w00 = (1.0 - s.fu) * (1.0 - s.fv);
      const double w10 = s.fu * (1.0 - s.fv);
      const double w01 = (1.0 - s.fu) * s.fv;
      const double w11 = s.fu * s.fv;
      for (int c = 0; c < 3; ++c) {
        double value = w00 * src.at(s.y0, s.x0, c);
        if (s.needs_x1) value += w10 * src.at(s.y0, x1, c);
        if (s.needs_y1) value += w01 * src.at(y1, s.x0, c);
        if (s.needs_x1 && s.needs_y1) value += w11 * src.at(y1, x1, c);
        out.at(y, x, c) = static_cast<float>(value);
      }
      valid[i] = 1;
    }
  });
  return {std::move(out), std::move(valid)};
}

std::pair<ScalarMap, ScalarMap> gradient(const ScalarMap& m) {
  if (m.height < 2 || m.width < 2) {
    throw Error(Errc::DegenerateSize, "gradient needs at least 2x2");
  }
  ScalarMap du(m.height, m.width, 0.0f, false);
  ScalarMap dv(m.height, m.width, 0.0f, false);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const std::size_t i = m.index(y, x);
      if (x + 1 < m.width) {
        if (m.mask[i] && m.valid(y, x + 1)) {
          du.data[i] = m.at(y, x + 1) - m.at(y, x);
          du.mask[i] = 1;
        }
      } else if (m.mask[i]) {
        du.mask[i] = 1;  // zero-padded edge
      }
      if (y + 1 < m.height) {
        if (m.mask[i] && m.valid(y + 1, x)) {
          dv.data[i] = m.at(y + 1, x) - m.at(y, x);
          dv.mask[i] = 1;
        }
      } else if (m.mask[i]) {
        dv.mask[i] = 1;
      }
    }
  }
  return {std::move(du), std::move(dv)};
}

ScalarMap mean_normalized_inverse_scaled(const ScalarMap& depth,
                                         double scale) {
  double sum = 0.0;
  std::int64_t count = 0;
  std::vector<double> inv(depth.size(), 0.0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!depth.mask[i]) continue;
    const double d = scale * static_cast<double>(depth.data[i]);
    if (!(d > 0.0)) {
      throw Error(Errc::NonPositiveDepth,
                  "inverse depth needs positive depths");
    }
    inv[i] = 1.0 / d;
    sum += inv[i];
    ++count;
  }
  if (count == 0) {
    throw Error(Errc::AllInvalid, "no valid depth pixels");
  }
  const double mean = sum / static_cast<double>(count);
  ScalarMap out(depth.height, depth.width, 0.0f, false);
  out.mask = depth.mask;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (depth.mask[i]) out.data[i] = static_cast<float>(inv[i] / mean);
  }
  return out;
}

ScalarMap mean_normalized_inverse(const ScalarMap& depth) {
  return mean_normalized_inverse_scaled(depth, 1.0);
}

Reduction masked_sum(const ScalarMap& m) {
  Reduction r;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.mask[i]) {
      r.sum += static_cast<double>(m.data[i]);
      ++r.count;
    }
  }
  return r;
}

Mask mask_and(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch, "mask sizes differ");
  }
  Mask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

std::int64_t mask_count(const Mask& m) {
  std::int64_t n = 0;
  for (std::uint8_t v : m) n += v != 0;
  return n;
}

Mask erode3x3_reflect(const Mask& m, int height, int width) {
  if (m.size() != static_cast<std::size_t>(height) * width) {
    throw Error(Errc::DimensionMismatch, "mask does not match dimensions");
  }
  Mask out(m.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      bool ok = true;
      for (int dy = -1; dy <= 1 && ok; ++dy) {
        for (int dx = -1; dx <= 1 && ok; ++dx) {
          const int yy = reflect_index(y + dy, height);
          const int xx = reflect_index(x + dx, width);
          ok = m[static_cast<std::size_t>(yy) * width + xx] != 0;
        }
      }
      out[static_cast<std::size_t>(y) * width + x] = ok ? 1 : 0;
    }
  }
  return out;
}

}  // namespace survgeo
