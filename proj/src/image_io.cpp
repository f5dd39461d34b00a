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

#include "survgeo/image_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace survgeo {

namespace {

// One whitespace-delimited token; PFM/PPM headers also allow '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      break;
    }
  }
  while ((c = in.get()) != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_dim(const std::string& tok, const std::string& path,
              const char* field) {
  try {
    const int v = std::stoi(tok);
    if (v <= 0) throw std::invalid_argument("non-positive");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path, field, "invalid value '" + tok + "'");
  }
}

struct PfmHeader {
  int channels = 0;
  int height = 0;
  int width = 0;
  bool little_endian = true;
};

PfmHeader read_pfm_header(std::istream& in, const std::string& path) {
  PfmHeader h;
  const std::string magic = next_token(in);
  if (magic == "Pf") {
    h.channels = 1;
  } else if (magic == "PF") {
    h.channels = 3;
  } else {
    throw ParseError(path, "magic", "expected 'Pf' or 'PF', got '" + magic +
                                        "'");
  }
  h.width = parse_dim(next_token(in), path, "width");
  h.height = parse_dim(next_token(in), path, "height");
  const std::string scale_tok = next_token(in);
  double scale;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    throw ParseError(path, "scale", "invalid value '" + scale_tok + "'");
  }
  if (scale == 0.0) throw ParseError(path, "scale", "must be non-zero");
  h.little_endian = scale < 0.0;
  return h;
}

std::vector<float> read_pfm_samples(std::istream& in, const PfmHeader& h,
                                    const std::string& path) {
  const std::size_t n =
      static_cast<std::size_t>(h.height) * h.width * h.channels;
  std::vector<float> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(n * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float)) {
    throw ParseError(path, "data", "truncated sample data");
  }
  if (!h.little_endian) {
    for (float& f : raw) {
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      u = ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) |
          ((u & 0x0000ff00u) << 8) | ((u & 0x000000ffu) << 24);
      std::memcpy(&f, &u, 4);
    }
  }
  return raw;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "", "cannot open file");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "", "cannot open file for writing");
  return out;
}

void write_pfm_header(std::ostream& out, int channels, int height,
                      int width) {
  out << (channels == 1 ? "Pf" : "PF") << "\n"
      << width << " " << height << "\n"
      << "-1.0\n";
}

}  // namespace

ScalarMap read_pfm(const std::string& path) {
  std::ifstream in = open_in(path);
  const PfmHeader h = read_pfm_header(in, path);
  if (h.channels != 1) {
    throw ParseError(path, "magic", "expected 1-channel 'Pf'");
  }
  const std::vector<float> raw = read_pfm_samples(in, h, path);
  ScalarMap map(h.height, h.width);
  for (int y = 0; y < h.height; ++y) {
    const int src_row = h.height - 1 - y;  // bottom-to-top storage
    for (int x = 0; x < h.width; ++x) {
      const float v = raw[static_cast<std::size_t>(src_row) * h.width + x];
      map.at(y, x) = v;
      map.mask[map.index(y, x)] = std::isfinite(v) ? 1 : 0;
    }
  }
  return map;
}

void write_pfm(const ScalarMap& map, const std::string& path) {
  std::ofstream out = open_out(path);
  write_pfm_header(out, 1, map.height, map.width);
  for (int y = map.height - 1; y >= 0; --y) {
    out.write(reinterpret_cast<const char*>(&map.data[map.index(y, 0)]),
              static_cast<std::streamsize>(map.width * sizeof(float)));
  }
}

VectorMap read_pfm3(const std::string& path) {
  std::ifstream in = open_in(path);
  const PfmHeader h = read_pfm_header(in, path);
  if (h.channels != 3) {
    throw ParseError(path, "magic", "expected 3-channel 'PF'");
  }
  const std::vector<float> raw = read_pfm_samples(in, h, path);
  VectorMap map(h.height, h.width);
  for (int y = 0; y < h.height; ++y) {
    const int src_row = h.height - 1 - y;
    for (int x = 0; x < h.width; ++x) {
      bool finite = true;
      for (int c = 0; c < 3; ++c) {
        const float v =
            raw[(static_cast<std::size_t>(src_row) * h.width + x) * 3 + c];
        map.at(y, x, c) = v;
        finite = finite && std::isfinite(v);
      }
      map.mask[static_cast<std::size_t>(y) * h.width + x] = finite ? 1 : 0;
    }
  }
  return map;
}

void write_pfm3(const VectorMap& map, const std::string& path) {
  std::ofstream out = open_out(path);
  write_pfm_header(out, 3, map.height, map.width);
  for (int y = map.height - 1; y >= 0; --y) {
    out.write(reinterpret_cast<const char*>(&map.data[map.index(y, 0, 0)]),
              static_cast<std::streamsize>(map.width * 3 * sizeof(float)));
  }
}

void write_mask_pfm(const Mask& mask, int height, int width,
                    const std::string& path) {
  ScalarMap m(height, width);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data[i] = mask[i] ? 1.0f : 0.0f;
  }
  write_pfm(m, path);
}

ColorImage read_ppm(const std::string& path) {
  std::ifstream in = open_in(path);
  const std::string magic = next_token(in);
  if (magic != "P6") {
    throw ParseError(path, "magic", "expected 'P6', got '" + magic + "'");
  }
  const int width = parse_dim(next_token(in), path, "width");
  const int height = parse_dim(next_token(in), path, "height");
  const int maxval = parse_dim(next_token(in), path, "maxval");
  if (maxval != 255) {
    throw ParseError(path, "maxval", "only 8-bit (255) is supported");
  }
  const std::size_t n = static_cast<std::size_t>(height) * width * 3;
  std::vector<unsigned char> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw ParseError(path, "data", "truncated sample data");
  }
  ColorImage img(height, width);
  for (std::size_t i = 0; i < n; ++i) {
    img.data[i] = static_cast<float>(raw[i]) / 255.0f;
  }
  return img;
}

void write_ppm(const ColorImage& image, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> raw(image.data.size());
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    double v = static_cast<double>(image.data[i]);
    if (!(v > 0.0)) v = 0.0;
    if (v > 1.0) v = 1.0;
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

}  // namespace survgeo
