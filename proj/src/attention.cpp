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

#include "survgeo/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survgeo/image_io.hpp"

namespace survgeo {

TokenBatch::TokenBatch(int n, int t) : cameras(n), tokens(t) {
  if (n <= 0 || t <= 0) {
    throw Error(Errc::ShapeMismatch, "token batch dims must be positive");
  }
  data.assign(static_cast<std::size_t>(n) * t, 0.0f);
}

void AttentionConfig::validate(const FeatureStack& x,
                               const TokenBatch& c) const {
  if (channels <= 0 || channels_proj <= 0 || height <= 0 || width <= 0 ||
      height_resized <= 0 || width_resized <= 0) {
    throw Error(Errc::ShapeMismatch, "attention dims must be positive");
  }
  if ((height_resized * width_resized) % 4 != 0) {
    throw Error(Errc::NonDivisibleSpatial,
                "resized extent h'*w' must be divisible by 4");
  }
  if (x.channels != channels || x.height != height || x.width != width) {
    throw Error(Errc::ShapeMismatch, "feature shape does not match config");
  }
  if (c.cameras != x.cameras) {
    throw Error(Errc::ShapeMismatch, "token and feature camera counts differ");
  }
  if (c.tokens != channels_proj * token_length()) {
    throw Error(Errc::ShapeMismatch,
                "token count must equal C' * L (L = h'w'/4)");
  }
  if (static_cast<int>(phi.size()) != channels_proj ||
      w_in.size() != static_cast<std::size_t>(channels_proj) * channels ||
      static_cast<int>(b_in.size()) != channels_proj ||
      w_out.size() != static_cast<std::size_t>(channels) * channels_proj ||
      static_cast<int>(b_out.size()) != channels) {
    throw Error(Errc::ShapeMismatch, "projection parameter shapes are wrong");
  }
}

FeatureStack project_channels(const FeatureStack& x,
                              const std::vector<double>& weight,
                              const std::vector<double>& bias,
                              int out_channels) {
  if (weight.size() !=
          static_cast<std::size_t>(out_channels) * x.channels ||
      static_cast<int>(bias.size()) != out_channels) {
    throw Error(Errc::ShapeMismatch, "projection weights mismatch");
  }
  FeatureStack out(x.cameras, out_channels, x.height, x.width);
  const std::size_t plane = static_cast<std::size_t>(x.height) * x.width;
  for (int cam = 0; cam < x.cameras; ++cam) {
    for (int co = 0; co < out_channels; ++co) {
      float* dst = out.data.data() + out.index(cam, co, 0, 0);
      for (std::size_t i = 0; i < plane; ++i) {
        double sum = bias[co];
        for (int ci = 0; ci < x.channels; ++ci) {
          sum += weight[static_cast<std::size_t>(co) * x.channels + ci] *
                 static_cast<double>(
                     x.data[x.index(cam, ci, 0, 0) + i]);
        }
        dst[i] = static_cast<float>(sum);
      }
    }
  }
  return out;
}

FeatureStack resize_bilinear(const FeatureStack& x, int out_height,
                             int out_width) {
  if (out_height <= 0 || out_width <= 0) {
    throw Error(Errc::ShapeMismatch, "resize target must be positive");
  }
  if (out_height == x.height && out_width == x.width) {
    return x;
  }
  FeatureStack out(x.cameras, x.channels, out_height, out_width);
  const double sy = static_cast<double>(x.height) / out_height;
  const double sx = static_cast<double>(x.width) / out_width;
  for (int cam = 0; cam < x.cameras; ++cam) {
    for (int c = 0; c < x.channels; ++c) {
      for (int y = 0; y < out_height; ++y) {
        double v = (y + 0.5) * sy - 0.5;
        v = std::clamp(v, 0.0, static_cast<double>(x.height - 1));
        const int y0 = static_cast<int>(std::floor(v));
        const double fv = v - y0;
        const int y1 = std::min(y0 + 1, x.height - 1);
        for (int xo = 0; xo < out_width; ++xo) {
          double u = (xo + 0.5) * sx - 0.5;
          u = std::clamp(u, 0.0, static_cast<double>(x.width - 1));
          const int x0 = static_cast<int>(std::floor(u));
          const double fu = u - x0;
          const int x1 = std::min(x0 + 1, x.width - 1);
          const double v00 = x.at(cam, c, y0, x0);
          const double v10 = x.at(cam, c, y0, x1);
          const double v01 = x.at(cam, c, y1, x0);
          const double v11 = x.at(cam, c, y1, x1);
          out.at(cam, c, y, xo) = static_cast<float>(
              (1.0 - fv) * ((1.0 - fu) * v00 + fu * v10) +
              fv * ((1.0 - fu) * v01 + fu * v11));
        }
      }
    }
  }
  return out;
}

TokenBatch load_token_batch(const std::string& path) {
  const ScalarMap m = read_pfm(path);
  TokenBatch batch(m.height, m.width);
  for (std::size_t i = 0; i < m.size(); ++i) {
    batch.data[i] = m.data[i];
  }
  return batch;
}

std::vector<double> load_matrix_pfm(const std::string& path, int* rows,
                                    int* cols) {
  const ScalarMap m = read_pfm(path);
  if (rows != nullptr) *rows = m.height;
  if (cols != nullptr) *cols = m.width;
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i] = static_cast<double>(m.data[i]);
  }
  return out;
}

FeatureStack cross_modal_attend(const FeatureStack& x, const TokenBatch& c,
                                const AttentionConfig& cfg,
                                AttentionStats* stats) {
  cfg.validate(x, c);
  const int cp = cfg.channels_proj;
  const int L = cfg.token_length();
  const std::size_t plane = static_cast<std::size_t>(cfg.height_resized) *
                            cfg.width_resized;

  FeatureStack value = resize_bilinear(
      project_channels(x, cfg.w_in, cfg.b_in, cp), cfg.height_resized,
      cfg.width_resized);

  if (stats != nullptr) {
    stats->min_row_sum = std::numeric_limits<double>::infinity();
    stats->max_row_sum = -std::numeric_limits<double>::infinity();
  }

  const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(L));
  FeatureStack mixed = value;  // residual term
  std::vector<double> scores(static_cast<std::size_t>(cp) * cp);
  for (int cam = 0; cam < x.cameras; ++cam) {
    // scores = Q K / sqrt(L), with Q the C' x L token matrix and K = Q^T
    const float* q = c.data.data() + static_cast<std::size_t>(cam) * c.tokens;
    for (int r = 0; r < cp; ++r) {
      for (int col = 0; col < cp; ++col) {
        double dot = 0.0;
        for (int l = 0; l < L; ++l) {
          dot += static_cast<double>(q[r * L + l]) *
                 static_cast<double>(q[col * L + l]);
        }
        scores[static_cast<std::size_t>(r) * cp + col] = dot * inv_sqrt_l;
      }
    }
    // row-wise softmax
    for (int r = 0; r < cp; ++r) {
      double* row = scores.data() + static_cast<std::size_t>(r) * cp;
      const double peak = *std::max_element(row, row + cp);
      double denom = 0.0;
      for (int col = 0; col < cp; ++col) {
        row[col] = std::exp(row[col] - peak);
        denom += row[col];
      }
      double row_sum = 0.0;
      for (int col = 0; col < cp; ++col) {
        row[col] /= denom;
        row_sum += row[col];
      }
      if (stats != nullptr) {
        stats->min_row_sum = std::min(stats->min_row_sum, row_sum);
        stats->max_row_sum = std::max(stats->max_row_sum, row_sum);
      }
    }
    // mixed = phi ⊙ (A V) + V
    for (int r = 0; r < cp; ++r) {
      float* dst = mixed.data.data() + mixed.index(cam, r, 0, 0);
      const double gate = cfg.phi[r];
      for (std::size_t i = 0; i < plane; ++i) {
        double sum = 0.0;
        for (int col = 0; col < cp; ++col) {
          sum += scores[static_cast<std::size_t>(r) * cp + col] *
                 static_cast<double>(
                     value.data[value.index(cam, col, 0, 0) + i]);
        }
        dst[i] = static_cast<float>(gate * sum + static_cast<double>(dst[i]));
      }
    }
  }

  return project_channels(resize_bilinear(mixed, cfg.height, cfg.width),
                          cfg.w_out, cfg.b_out, cfg.channels);
}

}  // namespace survgeo
