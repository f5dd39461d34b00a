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

#ifndef SURVGEO_LOSSES_HPP
#define SURVGEO_LOSSES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "survgeo/geometry.hpp"
#include "survgeo/raster.hpp"
#include "survgeo/spatial_depth.hpp"
#include "survgeo/warp.hpp"

namespace survgeo {

/// Loss weighting coefficients, defaulted to the training configuration this
/// library reproduces.
struct LossWeights {
  double alpha = 0.85;  // SSIM share of the photometric error

  // photometric context mix
  double lambda_t = 1.0;
  double lambda_s = 0.03;
  double lambda_st = 0.1;
  double lambda_mvrc = 0.2;

  // top-level term weights
  double omega_p = 1.0;
  double omega_s = 0.001;
  double omega_sdc = 0.001;
  double omega_snc = 0.01;
  double omega_dsc = 1.0;

  // weights of the terms recomputed from reconstructed spatial dense depth
  double kappa_src = 0.1;
  double kappa_snc = 0.1;
  double mu = 0.1;

  // pose-consistency split
  double alpha_t = 1.0;
  double alpha_r = 1.0;

  void validate() const;
};

/// A masked scalar reduction: the mean over `count` contributing pixels.
/// count == 0 means the term had no support and contributes 0.
struct LossTerm {
  double value = 0.0;
  std::int64_t count = 0;
};

/// Per-pixel structural similarity with 3x3 box windows, reflect padding,
/// channel-averaged, range [-1, 1]. ssim(x, x) == 1 exactly.
ScalarMap ssim(const ColorImage& a, const ColorImage& b);

/// (1 - alpha) * |a - b|_1 + alpha * (1 - SSIM) / 2, channel-averaged.
/// pe(x, x) == 0 exactly.
ScalarMap photometric_error(const ColorImage& a, const ColorImage& b,
                            double alpha = 0.85);

/// Per-pixel minimum of the photometric error over candidate syntheses,
/// taken only over candidates valid at that pixel, averaged over pixels
/// valid in at least one candidate. Candidate validity is eroded by the
/// SSIM window so zero-filled invalid pixels never contaminate the
/// reduction. Throws AllInvalid when no pixel survives.
LossTerm context_photometric(const ColorImage& target,
                             const std::vector<const WarpResult*>& candidates,
                             double alpha = 0.85);

/// Non-throwing core of context_photometric: returns {0, 0} when no pixel
/// is covered instead of raising AllInvalid.
LossTerm context_photometric_term(
    const ColorImage& target, const std::vector<const WarpResult*>& candidates,
    double alpha = 0.85);

/// Photometric error between the spatially synthesized image and each
/// spatial-temporally synthesized candidate within their joint validity,
/// minimum over candidates, masked mean. Empty overlap reports 0 with
/// count 0.
LossTerm mvrc(const WarpResult& spatial,
              const std::vector<const WarpResult*>& spatial_temporal,
              double alpha = 0.85);

/// Mean absolute depth difference (meters) over the overlap region.
LossTerm sdc(const ScalarMap& estimated, const ReconstructedDepth& spatial);

/// Surface normal consistency: mean of 1 - |cos(n, m)| over shared valid
/// pixels. The cosine is renormalized per pixel in double precision, so the
/// loss of a field against itself is exactly 0, and negating either field
/// leaves the value bitwise unchanged. Throws AllInvalid when the shared
/// mask is empty.
LossTerm snc(const VectorMap& normals, const VectorMap& prior_normals);

/// Edge-aware smoothness of mean-normalized inverse depth: per-axis gradient
/// magnitudes weighted by exp(-|image gradient|) (channel-mean), averaged
/// over valid pixels. Invariant under depth scaling.
LossTerm smoothness(const ScalarMap& depth, const ColorImage& image);

/// Gradient consistency between the mean-normalized inverse of the estimated
/// depth and of the prior depth: masked mean L1 over both axes. Scale and
/// shift of either depth's disparity normalization cancel.
LossTerm dsc(const ScalarMap& depth, const ScalarMap& prior_depth);

struct PoseConsistencyResult {
  double value = 0.0;
  /// Set when a rotation sat within 1e-6 of the Euler-extraction
  /// singularity; the value is still computed with the documented
  /// convention (roll := 0 there).
  bool gimbal_lock = false;
};

/// Re-expresses every per-camera motion in the first (front) camera's frame
/// and penalizes squared translation and intrinsic ZYX Euler-angle
/// deviations from the front camera's motion:
///   alpha_t * sum_j |t_1 - t~_j|^2 + alpha_r * sum_j sum_angles (r_1 - r~_j)^2
/// Exactly 0 when all motions are conjugates of one body motion.
PoseConsistencyResult pose_consistency(
    const std::vector<RigidTransform>& poses, const Rig& rig,
    const LossWeights& weights);

/// Intrinsic ZYX (yaw, pitch, roll) Euler angles; at the |pitch| = pi/2
/// singularity roll is fixed to 0. Returns {yaw, pitch, roll} and sets
/// *gimbal_lock if within 1e-6 of the singularity.
Vec3 euler_zyx(const Mat3& rotation, bool* gimbal_lock = nullptr);

/// Inputs to the weighted total. Absent optionals are allowed only when the
/// corresponding effective weight is 0 (MissingTerm otherwise).
struct LossTermSet {
  std::optional<LossTerm> photometric_temporal;
  std::optional<LossTerm> photometric_spatial;
  std::optional<LossTerm> photometric_spatial_temporal;
  std::optional<LossTerm> mvrc;
  std::optional<LossTerm> smoothness;
  std::optional<LossTerm> sdc;
  std::optional<LossTerm> snc;
  std::optional<LossTerm> dsc;
  /// Photometric terms recomputed with reconstructed spatial dense depth.
  std::optional<LossTerm> src_temporal;
  std::optional<LossTerm> src_spatial;
  std::optional<LossTerm> src_spatial_temporal;
  std::optional<LossTerm> src_mvrc;
  std::optional<LossTerm> snc_spatial;
};

struct LossReport {
  struct Entry {
    std::string name;
    double value = 0.0;
    std::int64_t count = 0;
    double weight = 0.0;  // effective weight of this leaf in the total
  };
  std::vector<Entry> terms;
  double total = 0.0;

  /// Sum of weight * value over the leaves; the constructor guarantees
  /// total == recompute() and callers may re-verify to 1e-9.
  double recompute() const;
};

/// Assembles the weighted total:
///   photometric = lambda_t*T + lambda_s*S + lambda_st*ST + lambda_mvrc*MVRC
///   src         = same mix over the src_* terms
///   total = omega_p*photometric + omega_s*smooth + omega_sdc*sdc
///         + omega_snc*snc + omega_dsc*dsc
///         + mu*(kappa_src*src + kappa_snc*snc_spatial)
LossReport total_loss(const LossTermSet& terms, const LossWeights& weights);

}  // namespace survgeo

#endif  // SURVGEO_LOSSES_HPP
