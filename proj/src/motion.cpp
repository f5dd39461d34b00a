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

#include "survgeo/motion.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "survgeo/image_io.hpp"

namespace survgeo {

Mat3 so3_exp(const Vec3& w) {
  const double theta2 = w.squaredNorm();
  Mat3 hat;
  hat << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  if (theta2 < 1e-16) {  // below 1e-8 rad: 2nd-order series
    return Mat3::Identity() + hat + 0.5 * (hat * hat);
  }
  const double theta = std::sqrt(theta2);
  return Mat3::Identity() + std::sin(theta) / theta * hat +
         (1.0 - std::cos(theta)) / theta2 * (hat * hat);
}

namespace {

std::vector<double> global_average_pool(const float* features, int channels,
                                        int height, int width) {
  std::vector<double> pooled(channels, 0.0);
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  for (int c = 0; c < channels; ++c) {
    double sum = 0.0;
    const float* p = features + static_cast<std::size_t>(c) * plane;
    for (std::size_t i = 0; i < plane; ++i) sum += p[i];
    pooled[c] = sum / static_cast<double>(plane);
  }
  return pooled;
}

void check_stack(const FeatureStack& f) {
  if (f.cameras <= 0 ||
      f.data.size() != static_cast<std::size_t>(f.cameras) * f.per_camera()) {
    throw Error(Errc::ShapeMismatch, "feature stack storage mismatch");
  }
}

/// T_i = (E_i^-1 E_1) M (E_1^-1 E_i)
std::vector<RigidTransform> distribute(const RigidTransform& motion,
                                       const Rig& rig) {
  std::vector<RigidTransform> out;
  out.reserve(rig.size());
  for (int id = 1; id <= rig.size(); ++id) {
    const RigidTransform from_front = rig.camera_to_camera(1, id);
    out.push_back(
        compose(compose(from_front, motion), inverse(from_front)));
  }
  return out;
}

std::vector<float> blend_features(const FeatureStack& f,
                                  const std::vector<double>& weights) {
  std::vector<float> fused(f.per_camera(), 0.0f);
  std::vector<double> acc(f.per_camera(), 0.0);
  for (int cam = 0; cam < f.cameras; ++cam) {
    const float* p = f.data.data() + cam * f.per_camera();
    const double w = weights[cam];
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += w * static_cast<double>(p[i]);
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    fused[i] = static_cast<float>(acc[i]);
  }
  return fused;
}

}  // namespace

AffinePoseDecoder::AffinePoseDecoder(std::vector<double> weight,
                                     std::vector<double> bias, int channels)
    : weight_(std::move(weight)), bias_(std::move(bias)), channels_(channels) {
  if (channels_ <= 0 || weight_.size() != static_cast<std::size_t>(6) * channels_ ||
      bias_.size() != 6) {
    throw Error(Errc::ShapeMismatch, "decoder weights must be 6 x channels");
  }
}

RigidTransform AffinePoseDecoder::operator()(const float* features,
                                             int channels, int height,
                                             int width) const {
  if (channels != channels_) {
    throw Error(Errc::ShapeMismatch,
                "decoder expects " + std::to_string(channels_) +
                    " channels, got " + std::to_string(channels));
  }
  const std::vector<double> pooled =
      global_average_pool(features, channels, height, width);
  double v[6];
  for (int r = 0; r < 6; ++r) {
    double sum = bias_[r];
    for (int c = 0; c < channels; ++c) {
      sum += weight_[static_cast<std::size_t>(r) * channels + c] * pooled[c];
    }
    v[r] = sum;
  }
  return RigidTransform(so3_exp(Vec3(v[0], v[1], v[2])),
                        Vec3(v[3], v[4], v[5]));
}

AffineViewWeigher::AffineViewWeigher(std::vector<double> weight,
                                     std::vector<double> bias, int channels,
                                     int views)
    : weight_(std::move(weight)),
      bias_(std::move(bias)),
      channels_(channels),
      views_(views) {
  if (channels_ <= 0 || views_ <= 0 ||
      weight_.size() != static_cast<std::size_t>(views_) * channels_ ||
      bias_.size() != static_cast<std::size_t>(views_)) {
    throw Error(Errc::ShapeMismatch, "weigher weights must be views x channels");
  }
}

std::vector<double> AffineViewWeigher::operator()(
    const std::vector<double>& pooled) const {
  if (static_cast<int>(pooled.size()) != channels_) {
    throw Error(Errc::ShapeMismatch,
                "weigher expects " + std::to_string(channels_) + " channels");
  }
  std::vector<double> logits(views_, 0.0);
  for (int r = 0; r < views_; ++r) {
    double sum = bias_[r];
    for (int c = 0; c < channels_; ++c) {
      sum += weight_[static_cast<std::size_t>(r) * channels_ + c] * pooled[c];
    }
    logits[r] = sum;
  }
  return logits;
}

std::vector<double> adaptive_weights(const FeatureStack& f,
                                     const ViewWeigher& xi) {
  check_stack(f);
  // spatial pool per camera, then camera-mean
  std::vector<double> mean_pooled(f.channels, 0.0);
  for (int cam = 0; cam < f.cameras; ++cam) {
    const std::vector<double> pooled = global_average_pool(
        f.data.data() + cam * f.per_camera(), f.channels, f.height, f.width);
    for (int c = 0; c < f.channels; ++c) mean_pooled[c] += pooled[c];
  }
  for (double& v : mean_pooled) v /= f.cameras;

  std::vector<double> logits = xi(mean_pooled);
  if (static_cast<int>(logits.size()) != f.cameras) {
    throw Error(Errc::ShapeMismatch, "weigher must emit one logit per camera");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double& l : logits) {
    l = std::exp(l - peak);
    denom += l;
  }
  for (double& l : logits) l /= denom;
  return logits;
}

std::vector<RigidTransform> adaptive_joint_motion(const FeatureStack& f,
                                                  const ViewWeigher& xi,
                                                  const PoseDecoder& decoder,
                                                  const Rig& rig) {
  check_stack(f);
  if (f.cameras != rig.size()) {
    throw Error(Errc::ShapeMismatch, "one feature block per camera required");
  }
  const std::vector<double> weights = adaptive_weights(f, xi);
  const std::vector<float> fused = blend_features(f, weights);
  const RigidTransform motion =
      decoder(fused.data(), f.channels, f.height, f.width);
  return distribute(motion, rig);
}

std::vector<RigidTransform> joint_motion(const FeatureStack& f,
                                         const PoseDecoder& decoder,
                                         const Rig& rig) {
  check_stack(f);
  if (f.cameras != rig.size()) {
    throw Error(Errc::ShapeMismatch, "one feature block per camera required");
  }
  const std::vector<double> uniform(f.cameras, 1.0 / f.cameras);
  const std::vector<float> fused = blend_features(f, uniform);
  const RigidTransform motion =
      decoder(fused.data(), f.channels, f.height, f.width);
  return distribute(motion, rig);
}

std::vector<RigidTransform> front_motion(const FeatureStack& f,
                                         const PoseDecoder& decoder,
                                         const Rig& rig,
                                         bool use_all_features) {
  check_stack(f);
  if (f.cameras != rig.size()) {
    throw Error(Errc::ShapeMismatch, "one feature block per camera required");
  }
  RigidTransform motion;
  if (use_all_features) {
    const std::vector<double> uniform(f.cameras, 1.0 / f.cameras);
    const std::vector<float> fused = blend_features(f, uniform);
    motion = decoder(fused.data(), f.channels, f.height, f.width);
  } else {
    motion = decoder(f.data.data(), f.channels, f.height, f.width);
  }
  return distribute(motion, rig);
}

std::vector<RigidTransform> per_camera_motion(const FeatureStack& f,
                                              const PoseDecoder& decoder) {
  check_stack(f);
  std::vector<RigidTransform> out;
  out.reserve(f.cameras);
  for (int cam = 0; cam < f.cameras; ++cam) {
    out.push_back(decoder(f.data.data() + cam * f.per_camera(), f.channels,
                          f.height, f.width));
  }
  return out;
}

namespace {

/// Reads a PFM as a row-major double matrix (top-to-bottom rows).
std::vector<double> pfm_matrix(const std::string& path, int* rows, int* cols) {
  const ScalarMap m = read_pfm(path);
  *rows = m.height;
  *cols = m.width;
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i] = static_cast<double>(m.data[i]);
  }
  return out;
}

nlohmann::json load_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "", "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, "", e.what());
  }
}

std::string sibling(const std::string& meta_path, const std::string& rel) {
  return (std::filesystem::path(meta_path).parent_path() / rel).string();
}

}  // namespace

AffinePoseDecoder load_pose_decoder(const std::string& meta_path) {
  const nlohmann::json meta = load_meta(meta_path);
  for (const char* key : {"weights", "bias"}) {
    if (!meta.contains(key) || !meta[key].is_string()) {
      throw ParseError(meta_path, key, "expected a PFM path");
    }
  }
  int rows = 0, cols = 0;
  std::vector<double> weight =
      pfm_matrix(sibling(meta_path, meta["weights"].get<std::string>()),
                 &rows, &cols);
  if (rows != 6) {
    throw ParseError(meta_path, "weights", "expected a 6-row matrix");
  }
  int brows = 0, bcols = 0;
  std::vector<double> bias =
      pfm_matrix(sibling(meta_path, meta["bias"].get<std::string>()), &brows,
                 &bcols);
  if (brows * bcols != 6) {
    throw ParseError(meta_path, "bias", "expected 6 entries");
  }
  return AffinePoseDecoder(std::move(weight), std::move(bias), cols);
}

AffineViewWeigher load_view_weigher(const std::string& meta_path) {
  const nlohmann::json meta = load_meta(meta_path);
  for (const char* key : {"weights", "bias"}) {
    if (!meta.contains(key) || !meta[key].is_string()) {
      throw ParseError(meta_path, key, "expected a PFM path");
    }
  }
  int rows = 0, cols = 0;
  std::vector<double> weight =
      pfm_matrix(sibling(meta_path, meta["weights"].get<std::string>()),
                 &rows, &cols);
  int brows = 0, bcols = 0;
  std::vector<double> bias =
      pfm_matrix(sibling(meta_path, meta["bias"].get<std::string>()), &brows,
                 &bcols);
  if (brows * bcols != rows) {
    throw ParseError(meta_path, "bias", "expected one entry per view");
  }
  return AffineViewWeigher(std::move(weight), std::move(bias), cols, rows);
}

}  // namespace survgeo
