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

#ifndef SURVGEO_IMAGE_IO_HPP
#define SURVGEO_IMAGE_IO_HPP

#include <string>

#include "survgeo/raster.hpp"

namespace survgeo {

// PFM: little-endian binary float maps, scale field -1.0, rows stored bottom
// to top per the format convention. "Pf" is one channel, "PF" three. Writes
// followed by reads round-trip bit-exactly. On read, non-finite samples are
// marked invalid in the mask (values are preserved).

ScalarMap read_pfm(const std::string& path);
void write_pfm(const ScalarMap& map, const std::string& path);

VectorMap read_pfm3(const std::string& path);
void write_pfm3(const VectorMap& map, const std::string& path);

/// Writes a mask as a 1-channel PFM of 1.0 / 0.0.
void write_mask_pfm(const Mask& mask, int height, int width,
                    const std::string& path);

// PPM: binary P6, 8-bit, maxval 255, sample s mapped to s / 255.0 on read
// and round(v * 255) clamped on write.

ColorImage read_ppm(const std::string& path);
void write_ppm(const ColorImage& image, const std::string& path);

}  // namespace survgeo

#endif  // SURVGEO_IMAGE_IO_HPP
