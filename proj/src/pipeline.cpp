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

#include "survgeo/pipeline.hpp"

#include <string>

#include "survgeo/warp.hpp"

namespace survgeo {

namespace {

/// Pixel-pooled accumulation of masked means across cameras and neighbors.
struct TermAccum {
  double weighted_sum = 0.0;
  std::int64_t count = 0;
  bool present = false;

  void add(const LossTerm& term) {
    present = true;
    weighted_sum += term.value * static_cast<double>(term.count);
    count += term.count;
  }
  std::optional<LossTerm> term() const {
    if (!present) return std::nullopt;
    return LossTerm{count > 0 ? weighted_sum / count : 0.0, count};
  }
};

const Mask* occlusion_of(const CameraFrameData& cam) {
  return cam.occlusion.has_value() ? &*cam.occlusion : nullptr;
}

struct SuiteWarps {
  std::vector<WarpResult> temporal;
  // per neighbor: one spatial warp and its spatial-temporal siblings
  struct NeighborWarps {
    WarpResult spatial;
    std::vector<WarpResult> spatial_temporal;
  };
  std::vector<NeighborWarps> neighbors;
};

SuiteWarps build_warps(const FrameSet& frames, int target_id,
                       const ScalarMap& lifting_depth) {
  const Camera& cam_i = frames.rig.camera(target_id);
  const CameraFrameData& data_i = frames.cameras[target_id - 1];
  SuiteWarps warps;

  for (std::size_t k = 0; k < data_i.temporal_images.size(); ++k) {
    const CoordGrid coords =
        warp_coords(lifting_depth, cam_i.intrinsics, cam_i.intrinsics,
                    data_i.poses[k]);
    warps.temporal.push_back(synthesize(data_i.temporal_images[k], coords,
                                        occlusion_of(data_i),
                                        occlusion_of(data_i)));
  }

  for (int j : data_i.spatial_neighbors) {
    const Camera& cam_j = frames.rig.camera(j);
    const CameraFrameData& data_j = frames.cameras[j - 1];
    SuiteWarps::NeighborWarps nw;
    const RigidTransform to_j = frames.rig.camera_to_camera(target_id, j);
    const CoordGrid coords_s =
        warp_coords(lifting_depth, cam_i.intrinsics, cam_j.intrinsics, to_j);
    nw.spatial = synthesize(data_j.image, coords_s, occlusion_of(data_j),
                            occlusion_of(data_i));
    for (std::size_t k = 0; k < data_j.temporal_images.size(); ++k) {
      const CoordGrid coords_st =
          warp_coords(lifting_depth, cam_i.intrinsics, cam_j.intrinsics,
                      compose(data_j.poses[k], to_j));
      nw.spatial_temporal.push_back(
          synthesize(data_j.temporal_images[k], coords_st,
                     occlusion_of(data_j), occlusion_of(data_i)));
    }
    warps.neighbors.push_back(std::move(nw));
  }
  return warps;
}

PhotometricSuite suite_from_warps(const ColorImage& target,
                                  const SuiteWarps& warps, double alpha) {
  PhotometricSuite suite;
  if (!warps.temporal.empty()) {
    std::vector<const WarpResult*> cands;
    for (const WarpResult& w : warps.temporal) cands.push_back(&w);
    suite.temporal = context_photometric_term(target, cands, alpha);
  }
  if (!warps.neighbors.empty()) {
    std::vector<const WarpResult*> spatial_cands;
    std::vector<const WarpResult*> st_cands;
    TermAccum mvrc_accum;
    for (const auto& nw : warps.neighbors) {
      spatial_cands.push_back(&nw.spatial);
      std::vector<const WarpResult*> st_of_j;
      for (const WarpResult& w : nw.spatial_temporal) {
        st_cands.push_back(&w);
        st_of_j.push_back(&w);
      }
      if (!st_of_j.empty()) {
        mvrc_accum.add(mvrc(nw.spatial, st_of_j, alpha));
      }
    }
    suite.spatial = context_photometric_term(target, spatial_cands, alpha);
    if (!st_cands.empty()) {
      suite.spatial_temporal =
          context_photometric_term(target, st_cands, alpha);
      suite.mvrc = mvrc_accum.term();
    }
  }
  return suite;
}

ViewPair pair_for(const FrameSet& frames, int target_id, int source_id) {
  ViewPair pair;
  pair.target = frames.rig.camera(target_id).intrinsics;
  pair.source = frames.rig.camera(source_id).intrinsics;
  pair.target_from_source = frames.rig.camera_to_camera(source_id, target_id);
  return pair;
}

struct SrcAccums {
  TermAccum temporal, spatial, spatial_temporal, mvrc_term;
};

void accumulate_src(const FrameSet& frames, WarpStrategy strategy,
                    double alpha, SrcAccums& accums) {
  for (int id = 1; id <= frames.rig.size(); ++id) {
    const CameraFrameData& data_i = frames.cameras[id - 1];
    const Camera& cam_i = frames.rig.camera(id);
    for (int j : data_i.spatial_neighbors) {
      const CameraFrameData& data_j = frames.cameras[j - 1];
      const ReconstructedDepth reconstructed =
          reconstruct(strategy, data_j.depth, pair_for(frames, id, j),
                      &data_i.depth, cam_i.height, cam_i.width);
      const SuiteWarps warps = build_warps(frames, id, reconstructed.depth);
      const PhotometricSuite suite =
          suite_from_warps(data_i.image, warps, alpha);
      if (suite.temporal) accums.temporal.add(*suite.temporal);
      if (suite.spatial) accums.spatial.add(*suite.spatial);
      if (suite.spatial_temporal) {
        accums.spatial_temporal.add(*suite.spatial_temporal);
      }
      if (suite.mvrc) accums.mvrc_term.add(*suite.mvrc);
    }
  }
}

}  // namespace

FrameSet::FrameSet(Rig r, std::vector<CameraFrameData> cams)
    : rig(std::move(r)), cameras(std::move(cams)) {
  if (static_cast<int>(cameras.size()) != rig.size()) {
    throw Error(Errc::ShapeMismatch, "one camera data block per rig camera");
  }
  for (int id = 1; id <= rig.size(); ++id) {
    const Camera& cam = rig.camera(id);
    const CameraFrameData& data = cameras[id - 1];
    const std::string tag = "camera " + std::to_string(id);
    if (data.image.height != cam.height || data.image.width != cam.width) {
      throw Error(Errc::DimensionMismatch, tag + ": image size != rig size");
    }
    if (data.depth.height != cam.height || data.depth.width != cam.width) {
      throw Error(Errc::DimensionMismatch, tag + ": depth size != rig size");
    }
    if (data.poses.size() != data.temporal_images.size()) {
      throw Error(Errc::ShapeMismatch,
                  tag + ": one pose per temporal image required");
    }
    for (const ColorImage& img : data.temporal_images) {
      if (img.height != cam.height || img.width != cam.width) {
        throw Error(Errc::DimensionMismatch,
                    tag + ": temporal image size != rig size");
      }
    }
    if (data.occlusion.has_value() &&
        data.occlusion->size() !=
            static_cast<std::size_t>(cam.height) * cam.width) {
      throw Error(Errc::DimensionMismatch, tag + ": occlusion mask size");
    }
    for (int j : data.spatial_neighbors) {
      if (j == id) {
        throw Error(Errc::InvalidArgument,
                    tag + ": camera cannot neighbor itself");
      }
      rig.camera(j);  // range check
    }
  }
}

PhotometricSuite photometric_suite(const FrameSet& frames, int target_id,
                                   const ScalarMap& lifting_depth,
                                   double alpha) {
  const Camera& cam = frames.rig.camera(target_id);
  if (lifting_depth.height != cam.height || lifting_depth.width != cam.width) {
    throw Error(Errc::DimensionMismatch, "lifting depth size != rig size");
  }
  const SuiteWarps warps = build_warps(frames, target_id, lifting_depth);
  return suite_from_warps(frames.cameras[target_id - 1].image, warps, alpha);
}

double src(const FrameSet& frames, WarpStrategy strategy,
           const LossWeights& weights) {
  SrcAccums accums;
  accumulate_src(frames, strategy, weights.alpha, accums);
  auto value = [](const std::optional<LossTerm>& t) {
    return t.has_value() && t->count > 0 ? t->value : 0.0;
  };
  return weights.lambda_t * value(accums.temporal.term()) +
         weights.lambda_s * value(accums.spatial.term()) +
         weights.lambda_st * value(accums.spatial_temporal.term()) +
         weights.lambda_mvrc * value(accums.mvrc_term.term());
}

FrameLossResult compute_frame_losses(const FrameSet& frames,
                                     const LossWeights& weights,
                                     WarpStrategy strategy,
                                     const PseudoDepthConfig& pseudo_cfg) {
  weights.validate();
  const int n = frames.rig.size();

  TermAccum photometric_temporal, photometric_spatial,
      photometric_spatial_temporal, mvrc_accum;
  TermAccum smooth_accum, sdc_accum, snc_accum, dsc_accum, snc_spatial_accum;

  // pseudo-depth priors, one per camera that carries a raw disparity
  std::vector<std::optional<ScalarMap>> pseudo(n);
  for (int id = 1; id <= n; ++id) {
    const CameraFrameData& data = frames.cameras[id - 1];
    if (data.raw_disparity.has_value()) {
      pseudo[id - 1] = pseudo_depth(*data.raw_disparity, pseudo_cfg);
    }
  }

  for (int id = 1; id <= n; ++id) {
    const CameraFrameData& data_i = frames.cameras[id - 1];
    const Camera& cam_i = frames.rig.camera(id);

    const PhotometricSuite suite =
        photometric_suite(frames, id, data_i.depth, weights.alpha);
    if (suite.temporal) photometric_temporal.add(*suite.temporal);
    if (suite.spatial) photometric_spatial.add(*suite.spatial);
    if (suite.spatial_temporal) {
      photometric_spatial_temporal.add(*suite.spatial_temporal);
    }
    if (suite.mvrc) mvrc_accum.add(*suite.mvrc);

    smooth_accum.add(smoothness(data_i.depth, data_i.image));

    for (int j : data_i.spatial_neighbors) {
      const CameraFrameData& data_j = frames.cameras[j - 1];
      const ViewPair pair = pair_for(frames, id, j);
      const ReconstructedDepth reconstructed =
          reconstruct(strategy, data_j.depth, pair, &data_i.depth,
                      cam_i.height, cam_i.width);
      sdc_accum.add(sdc(data_i.depth, reconstructed));

      if (pseudo[j - 1].has_value()) {
        // Spatial normal prior: always modified backward warping, with the
        // correspondences from the metric estimate.
        const ReconstructedDepth metric_spatial =
            reconstruct_mbw(data_j.depth, pair, data_i.depth);
        const ReconstructedDepth pseudo_spatial =
            reconstruct_mbw(*pseudo[j - 1], pair, data_i.depth);
        try {
          snc_spatial_accum.add(
              snc(spatial_normal_map(metric_spatial, cam_i.intrinsics),
                  spatial_normal_map(pseudo_spatial, cam_i.intrinsics)));
        } catch (const Error& e) {
          if (e.code() != Errc::AllInvalid) throw;
          snc_spatial_accum.add(LossTerm{0.0, 0});
        }
      }
    }

    if (pseudo[id - 1].has_value()) {
      const VectorMap n_hat = normal_map(data_i.depth, cam_i.intrinsics);
      const VectorMap n_prior =
          normal_map(*pseudo[id - 1], cam_i.intrinsics);
      snc_accum.add(snc(n_hat, n_prior));
      dsc_accum.add(dsc(data_i.depth, *pseudo[id - 1]));
    }
  }

  const double w_src =
      weights.mu * weights.kappa_src *
      (weights.lambda_t + weights.lambda_s + weights.lambda_st +
       weights.lambda_mvrc);
  SrcAccums src_accums;
  bool want_src = w_src != 0.0;
  if (want_src) {
    accumulate_src(frames, strategy, weights.alpha, src_accums);
  }

  LossTermSet terms;
  terms.photometric_temporal = photometric_temporal.term();
  terms.photometric_spatial = photometric_spatial.term();
  terms.photometric_spatial_temporal = photometric_spatial_temporal.term();
  terms.mvrc = mvrc_accum.term();
  terms.smoothness = smooth_accum.term();
  terms.sdc = sdc_accum.term();
  terms.snc = snc_accum.term();
  terms.dsc = dsc_accum.term();
  if (want_src) {
    terms.src_temporal = src_accums.temporal.term();
    terms.src_spatial = src_accums.spatial.term();
    terms.src_spatial_temporal = src_accums.spatial_temporal.term();
    terms.src_mvrc = src_accums.mvrc_term.term();
  }
  terms.snc_spatial = snc_spatial_accum.term();

  FrameLossResult result;
  result.report = total_loss(terms, weights);

  if (n >= 2) {
    std::size_t shared_poses = std::string::npos;
    for (const CameraFrameData& cam : frames.cameras) {
      shared_poses = std::min(shared_poses, cam.poses.size());
    }
    if (shared_poses > 0 && shared_poses != std::string::npos) {
      PoseConsistencyResult pooled;
      for (std::size_t k = 0; k < shared_poses; ++k) {
        std::vector<RigidTransform> poses;
        for (const CameraFrameData& cam : frames.cameras) {
          poses.push_back(cam.poses[k]);
        }
        const PoseConsistencyResult r =
            pose_consistency(poses, frames.rig, weights);
        pooled.value += r.value;
        pooled.gimbal_lock = pooled.gimbal_lock || r.gimbal_lock;
      }
      pooled.value /= static_cast<double>(shared_poses);
      result.pose_consistency = pooled;
    }
  }
  return result;
}

}  // namespace survgeo
