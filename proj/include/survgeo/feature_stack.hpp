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

#ifndef SURVGEO_FEATURE_STACK_HPP
#define SURVGEO_FEATURE_STACK_HPP

#include <cstddef>
#include <vector>

#include "survgeo/error.hpp"

namespace survgeo {

/// Per-camera feature arrays, all C x h x w with identical shapes.
struct FeatureStack {
  int cameras = 0;
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;  // [camera][channel][y][x]

  FeatureStack() = default;
  FeatureStack(int n, int c, int h, int w)
      : cameras(n), channels(c), height(h), width(w) {
    if (n <= 0 || c <= 0 || h <= 0 || w <= 0) {
      throw Error(Errc::ShapeMismatch, "feature stack dims must be positive");
    }
    data.assign(static_cast<std::size_t>(n) * c * h * w, 0.0f);
  }

  std::size_t index(int cam, int c, int y, int x) const {
    return ((static_cast<std::size_t>(cam) * channels + c) * height + y) *
               width +
           x;
  }
  float at(int cam, int c, int y, int x) const {
    return data[index(cam, c, y, x)];
  }
  float& at(int cam, int c, int y, int x) {
    return data[index(cam, c, y, x)];
  }
  std::size_t per_camera() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
};

}  // namespace survgeo

#endif  // SURVGEO_FEATURE_STACK_HPP
