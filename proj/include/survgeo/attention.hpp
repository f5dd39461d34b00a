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

#ifndef SURVGEO_ATTENTION_HPP
#define SURVGEO_ATTENTION_HPP

#include <string>
#include <vector>

#include "survgeo/feature_stack.hpp"

namespace survgeo {

/// Semantic tokens, one row of T reals per camera. T must equal
/// channels_proj * token_length of the attention config.
struct TokenBatch {
  int cameras = 0;
  int tokens = 0;
  std::vector<float> data;  // [camera][token]

  TokenBatch() = default;
  TokenBatch(int n, int t);

  float at(int cam, int t) const {
    return data[static_cast<std::size_t>(cam) * tokens + t];
  }
  float& at(int cam, int t) {
    return data[static_cast<std::size_t>(cam) * tokens + t];
  }
};

/// Shapes and injected parameters of the cross-modal block. Projections are
/// channel-wise affine maps (1x1 convolutions). The resized spatial extent
/// h' x w' must be divisible by 4; the token length is L = h'*w'/4.
struct AttentionConfig {
  int channels = 0;       // C
  int channels_proj = 0;  // C'
  int height = 0;         // h
  int width = 0;          // w
  int height_resized = 0; // h'
  int width_resized = 0;  // w'

  std::vector<double> phi;     // C', channel gate of the attention branch
  std::vector<double> w_in;    // C' x C row-major
  std::vector<double> b_in;    // C'
  std::vector<double> w_out;   // C x C' row-major
  std::vector<double> b_out;   // C

  int token_length() const { return height_resized * width_resized / 4; }
  void validate(const FeatureStack& x, const TokenBatch& c) const;
};

struct AttentionStats {
  double min_row_sum = 0.0;
  double max_row_sum = 0.0;
};

/// Cross-modal attention over per-camera feature blocks:
///   x' = resize(project_in(x))                    N x C' x (h'w')
///   Q  = reshape(tokens)    N x C' x L,  K = Q^T, V = x'
///   x' <- phi ⊙ softmax(QK / sqrt(L)) V + x'
///   out = project_out(resize_back(x'))            N x C x h x w
/// The attention matrix is per camera C' x C', softmax over its rows; rows
/// sum to 1. With phi = 0 the block reduces to the pure residual path.
/// Cameras never mix. Output shape always equals input shape.
FeatureStack cross_modal_attend(const FeatureStack& x, const TokenBatch& c,
                                const AttentionConfig& cfg,
                                AttentionStats* stats = nullptr);

/// Bilinear resize with half-pixel centers and clamped borders, used by the
/// attention block in both directions.
FeatureStack resize_bilinear(const FeatureStack& x, int out_height,
                             int out_width);

/// Channel-wise affine map (1x1 convolution): out[c'] = b[c'] + sum_c
/// w[c',c] * in[c]. `weight` is out_channels x in_channels row-major.
FeatureStack project_channels(const FeatureStack& x,
                              const std::vector<double>& weight,
                              const std::vector<double>& bias,
                              int out_channels);

/// Tokens stored as an N x T scalar PFM, one row per camera.
TokenBatch load_token_batch(const std::string& path);

/// Row-major matrix from a scalar PFM, for projection weights and gates.
std::vector<double> load_matrix_pfm(const std::string& path, int* rows,
                                    int* cols);

}  // namespace survgeo

#endif  // SURVGEO_ATTENTION_HPP
