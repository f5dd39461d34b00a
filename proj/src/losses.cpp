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

#include "survgeo/losses.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace survgeo {

namespace {

// Working constants of the windowed similarity; the luminance constant
// carries the larger stabilizer. See the constant-image regression test for
// the pinned reference value.
constexpr double kSsimLumC = 9e-4;
constexpr double kSsimStructC = 1e-4;

inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

void check_same_shape(const ColorImage& a, const ColorImage& b) {
  if (a.height != b.height || a.width != b.width) {
    throw Error(Errc::DimensionMismatch, "image dimensions differ");
  }
}

}  // namespace

void LossWeights::validate() const {
  const double all[] = {alpha,    lambda_t,  lambda_s,  lambda_st,
                        lambda_mvrc, omega_p, omega_s,  omega_sdc,
                        omega_snc, omega_dsc, kappa_src, kappa_snc,
                        mu,       alpha_t,   alpha_r};
  for (double w : all) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::InvalidArgument, "loss weights must be >= 0");
    }
  }
  if (alpha > 1.0) {
    throw Error(Errc::InvalidArgument, "alpha must lie in [0, 1]");
  }
}

ScalarMap ssim(const ColorImage& a, const ColorImage& b) {
  check_same_shape(a, b);
  const int h = a.height;
  const int w = a.width;
  ScalarMap out(h, w, 0.0f, true);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double channel_sum = 0.0;
      for (int c = 0; c < 3; ++c) {
        double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = reflect_index(y + dy, h);
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = reflect_index(x + dx, w);
            const double va = a.at(yy, xx, c);
            const double vb = b.at(yy, xx, c);
            sa += va;
            sb += vb;
            saa += va * va;
            sbb += vb * vb;
            sab += va * vb;
          }
        }
        const double mu_a = sa / 9.0;
        const double mu_b = sb / 9.0;
        const double var_a = saa / 9.0 - mu_a * mu_a;
        const double var_b = sbb / 9.0 - mu_b * mu_b;
        const double cov = sab / 9.0 - mu_a * mu_b;
        const double lum = (2.0 * (mu_a * mu_b) + kSsimLumC) /
                           (mu_a * mu_a + mu_b * mu_b + kSsimLumC);
        const double structure =
            (2.0 * cov + kSsimStructC) / (var_a + var_b + kSsimStructC);
        double s = lum * structure;
        if (s > 1.0) s = 1.0;
        if (s < -1.0) s = -1.0;
        channel_sum += s;
      }
      out.at(y, x) = static_cast<float>(channel_sum / 3.0);
    }
  }
  return out;
}

ScalarMap photometric_error(const ColorImage& a, const ColorImage& b,
                            double alpha) {
  check_same_shape(a, b);
  const ScalarMap similarity = ssim(a, b);
  ScalarMap out(a.height, a.width, 0.0f, true);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      const double l1 = (std::abs(static_cast<double>(a.at(y, x, 0)) -
                                  static_cast<double>(b.at(y, x, 0))) +
                         std::abs(static_cast<double>(a.at(y, x, 1)) -
                                  static_cast<double>(b.at(y, x, 1))) +
                         std::abs(static_cast<double>(a.at(y, x, 2)) -
                                  static_cast<double>(b.at(y, x, 2)))) /
                        3.0;
      const double dssim =
          (1.0 - static_cast<double>(similarity.at(y, x))) / 2.0;
      out.at(y, x) = static_cast<float>((1.0 - alpha) * l1 + alpha * dssim);
    }
  }
  return out;
}

namespace {

/// Minimum-over-candidates reduction of photometric error maps. Candidate
/// masks are expected pre-eroded; pixels valid in no candidate are skipped.
LossTerm min_reduce(const std::vector<ScalarMap>& errors,
                    const std::vector<Mask>& masks) {
  const int h = errors.front().height;
  const int w = errors.front().width;
  double sum = 0.0;
  std::int64_t count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      double best = std::numeric_limits<double>::infinity();
      bool any = false;
      for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!masks[k][i]) continue;
        const double v = static_cast<double>(errors[k].data[i]);
        if (!any || v < best) best = v;
        any = true;
      }
      if (any) {
        sum += best;
        ++count;
      }
    }
  }
  return {count > 0 ? sum / count : 0.0, count};
}

}  // namespace

LossTerm context_photometric_term(
    const ColorImage& target, const std::vector<const WarpResult*>& candidates,
    double alpha) {
  if (candidates.empty()) {
    throw Error(Errc::InvalidArgument, "need at least one candidate");
  }
  std::vector<ScalarMap> errors;
  std::vector<Mask> masks;
  errors.reserve(candidates.size());
  masks.reserve(candidates.size());
  for (const WarpResult* c : candidates) {
    check_same_shape(target, c->synthesized);
    errors.push_back(photometric_error(target, c->synthesized, alpha));
    masks.push_back(
        erode3x3_reflect(c->validity, target.height, target.width));
  }
  return min_reduce(errors, masks);
}

LossTerm context_photometric(const ColorImage& target,
                             const std::vector<const WarpResult*>& candidates,
                             double alpha) {
  LossTerm term = context_photometric_term(target, candidates, alpha);
  if (term.count == 0) {
    throw Error(Errc::AllInvalid, "no candidate covers any pixel");
  }
  return term;
}

LossTerm mvrc(const WarpResult& spatial,
              const std::vector<const WarpResult*>& spatial_temporal,
              double alpha) {
  if (spatial_temporal.empty()) {
    return {0.0, 0};
  }
  const Mask spatial_mask = erode3x3_reflect(
      spatial.validity, spatial.synthesized.height, spatial.synthesized.width);
  std::vector<ScalarMap> errors;
  std::vector<Mask> masks;
  for (const WarpResult* c : spatial_temporal) {
    check_same_shape(spatial.synthesized, c->synthesized);
    errors.push_back(
        photometric_error(spatial.synthesized, c->synthesized, alpha));
    masks.push_back(mask_and(
        spatial_mask, erode3x3_reflect(c->validity, spatial.synthesized.height,
                                       spatial.synthesized.width)));
  }
  return min_reduce(errors, masks);
}

LossTerm sdc(const ScalarMap& estimated, const ReconstructedDepth& spatial) {
  if (estimated.height != spatial.depth.height ||
      estimated.width != spatial.depth.width) {
    throw Error(Errc::DimensionMismatch, "depth dimensions differ");
  }
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    if (!estimated.mask[i] || !spatial.depth.mask[i]) continue;
    sum += std::abs(static_cast<double>(estimated.data[i]) -
                    static_cast<double>(spatial.depth.data[i]));
    ++count;
  }
  return {count > 0 ? sum / count : 0.0, count};
}

LossTerm snc(const VectorMap& normals, const VectorMap& prior) {
  if (normals.height != prior.height || normals.width != prior.width) {
    throw Error(Errc::DimensionMismatch, "normal map dimensions differ");
  }
  double sum = 0.0;
  std::int64_t count = 0;
  for (int y = 0; y < normals.height; ++y) {
    for (int x = 0; x < normals.width; ++x) {
      if (!normals.valid(y, x) || !prior.valid(y, x)) continue;
      const double ax = normals.at(y, x, 0);
      const double ay = normals.at(y, x, 1);
      const double az = normals.at(y, x, 2);
      const double bx = prior.at(y, x, 0);
      const double by = prior.at(y, x, 1);
      const double bz = prior.at(y, x, 2);
      const double aa = ax * ax + ay * ay + az * az;
      const double bb = bx * bx + by * by + bz * bz;
      if (aa < 1e-24 || bb < 1e-24) continue;
      // Renormalized in double: a field against itself yields |cos| == 1
      // exactly, and negating a field flips the dot sign bit only.
      double cosine = std::abs(ax * bx + ay * by + az * bz) /
                      std::sqrt(aa * bb);
      if (cosine > 1.0) cosine = 1.0;
      sum += 1.0 - cosine;
      ++count;
    }
  }
  if (count == 0) {
    throw Error(Errc::AllInvalid, "no shared valid normal pixels");
  }
  return {sum / count, count};
}

namespace {

/// Per-axis edge weights exp(-|channel-mean forward difference|).
void image_edge_weights(const ColorImage& image, std::vector<double>& wu,
                        std::vector<double>& wv) {
  const int h = image.height;
  const int w = image.width;
  wu.assign(static_cast<std::size_t>(h) * w, 1.0);
  wv.assign(static_cast<std::size_t>(h) * w, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w) {
        double g = 0.0;
        for (int c = 0; c < 3; ++c) {
          g += std::abs(static_cast<double>(image.at(y, x + 1, c)) -
                        static_cast<double>(image.at(y, x, c)));
        }
        wu[i] = std::exp(-g / 3.0);
      }
      if (y + 1 < h) {
        double g = 0.0;
        for (int c = 0; c < 3; ++c) {
          g += std::abs(static_cast<double>(image.at(y + 1, x, c)) -
                        static_cast<double>(image.at(y, x, c)));
        }
        wv[i] = std::exp(-g / 3.0);
      }
    }
  }
}

}  // namespace

LossTerm smoothness(const ScalarMap& depth, const ColorImage& image) {
  if (depth.height != image.height || depth.width != image.width) {
    throw Error(Errc::DimensionMismatch, "depth and image dimensions differ");
  }
  const ScalarMap d = mean_normalized_inverse(depth);
  auto [du, dv] = gradient(d);
  std::vector<double> wu, wv;
  image_edge_weights(image, wu, wv);
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!du.mask[i] || !dv.mask[i]) continue;
    sum += std::abs(static_cast<double>(du.data[i])) * wu[i] +
           std::abs(static_cast<double>(dv.data[i])) * wv[i];
    ++count;
  }
  return {count > 0 ? sum / count : 0.0, count};
}

LossTerm dsc(const ScalarMap& depth, const ScalarMap& prior_depth) {
  if (depth.height != prior_depth.height ||
      depth.width != prior_depth.width) {
    throw Error(Errc::DimensionMismatch, "depth dimensions differ");
  }
  const ScalarMap da = mean_normalized_inverse(depth);
  const ScalarMap db = mean_normalized_inverse(prior_depth);
  auto [dua, dva] = gradient(da);
  auto [dub, dvb] = gradient(db);
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (!dua.mask[i] || !dva.mask[i] || !dub.mask[i] || !dvb.mask[i]) continue;
    sum += std::abs(static_cast<double>(dua.data[i]) -
                    static_cast<double>(dub.data[i])) +
           std::abs(static_cast<double>(dva.data[i]) -
                    static_cast<double>(dvb.data[i]));
    ++count;
  }
  return {count > 0 ? sum / count : 0.0, count};
}

Vec3 euler_zyx(const Mat3& r, bool* gimbal_lock) {
  double sp = -r(2, 0);
  if (sp > 1.0) sp = 1.0;
  if (sp < -1.0) sp = -1.0;
  const double pitch = std::asin(sp);
  const bool locked = (std::numbers::pi / 2.0 - std::abs(pitch)) < 1e-6;
  if (gimbal_lock != nullptr) *gimbal_lock = locked;
  if (locked) {
    // roll is unobservable; fix it to 0 and fold everything into yaw
    return Vec3(std::atan2(-r(0, 1), r(1, 1)), pitch, 0.0);
  }
  return Vec3(std::atan2(r(1, 0), r(0, 0)), pitch,
              std::atan2(r(2, 1), r(2, 2)));
}

PoseConsistencyResult pose_consistency(
    const std::vector<RigidTransform>& poses, const Rig& rig,
    const LossWeights& weights) {
  if (rig.size() < 2) {
    throw Error(Errc::InvalidArgument,
                "pose consistency needs at least two cameras");
  }
  if (static_cast<int>(poses.size()) < rig.size()) {
    throw Error(Errc::InvalidArgument, "one pose per camera is required");
  }
  PoseConsistencyResult result;
  const Vec3 t_front = poses[0].translation();
  bool front_lock = false;
  const Vec3 euler_front = euler_zyx(poses[0].rotation(), &front_lock);
  result.gimbal_lock = front_lock;
  double t_loss = 0.0;
  double r_loss = 0.0;
  for (int j = 2; j <= rig.size(); ++j) {
    const RigidTransform to_front = rig.camera_to_camera(j, 1);
    const RigidTransform in_front =
        compose(compose(to_front, poses[j - 1]), inverse(to_front));
    t_loss += (t_front - in_front.translation()).squaredNorm();
    bool lock = false;
    const Vec3 euler_j = euler_zyx(in_front.rotation(), &lock);
    result.gimbal_lock = result.gimbal_lock || lock;
    const Vec3 diff = euler_front - euler_j;
    r_loss += diff.squaredNorm();
  }
  result.value = weights.alpha_t * t_loss + weights.alpha_r * r_loss;
  return result;
}

double LossReport::recompute() const {
  double sum = 0.0;
  for (const Entry& e : terms) sum += e.weight * e.value;
  return sum;
}

LossReport total_loss(const LossTermSet& terms, const LossWeights& weights) {
  weights.validate();
  LossReport report;
  auto add = [&report](const std::string& name,
                       const std::optional<LossTerm>& term, double weight) {
    if (weight != 0.0 && !term.has_value()) {
      throw Error(Errc::MissingTerm,
                  "'" + name + "' is weighted but has no inputs");
    }
    LossReport::Entry e;
    e.name = name;
    e.weight = weight;
    if (term.has_value()) {
      e.value = term->count > 0 ? term->value : 0.0;
      e.count = term->count;
    }
    report.terms.push_back(e);
  };

  const double w_src = weights.mu * weights.kappa_src;
  add("photometric_temporal", terms.photometric_temporal,
      weights.omega_p * weights.lambda_t);
  add("photometric_spatial", terms.photometric_spatial,
      weights.omega_p * weights.lambda_s);
  add("photometric_spatial_temporal", terms.photometric_spatial_temporal,
      weights.omega_p * weights.lambda_st);
  add("mvrc", terms.mvrc, weights.omega_p * weights.lambda_mvrc);
  add("smoothness", terms.smoothness, weights.omega_s);
  add("sdc", terms.sdc, weights.omega_sdc);
  add("snc", terms.snc, weights.omega_snc);
  add("dsc", terms.dsc, weights.omega_dsc);
  add("src_temporal", terms.src_temporal, w_src * weights.lambda_t);
  add("src_spatial", terms.src_spatial, w_src * weights.lambda_s);
  add("src_spatial_temporal", terms.src_spatial_temporal,
      w_src * weights.lambda_st);
  add("src_mvrc", terms.src_mvrc, w_src * weights.lambda_mvrc);
  add("snc_spatial", terms.snc_spatial, weights.mu * weights.kappa_snc);
  report.total = report.recompute();
  return report;
}

}  // namespace survgeo
