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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "survgeo/image_io.hpp"
#include "survgeo/losses.hpp"

using namespace survgeo;

namespace {

/// Axis-angle of a rotation matrix; test-side inverse of the exponential.
Vec3 so3_log(const Mat3& r) {
  const double cos_theta = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  if (theta < 1e-10) return Vec3::Zero();
  Vec3 axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return theta / (2.0 * std::sin(theta)) * axis;
}

Rig scattered_rig(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Camera> cams;
  for (int i = 0; i < n; ++i) {
    const Mat3 r = (Eigen::AngleAxisd(u(rng), Vec3::UnitY()) *
                    Eigen::AngleAxisd(0.3 * u(rng), Vec3::UnitX()))
                       .toRotationMatrix();
    cams.push_back(Camera{i + 1, Intrinsics(100, 100, 50, 50),
                          RigidTransform(r, Vec3(u(rng), u(rng), u(rng))),
                          32, 32});
  }
  return Rig(std::move(cams));
}

/// Decoder that reads the 6-vector straight out of the first six channel
/// means; weights form the identity pick-off.
AffinePoseDecoder passthrough_decoder() {
  std::vector<double> weight(6 * 6, 0.0);
  for (int i = 0; i < 6; ++i) weight[i * 6 + i] = 1.0;
  return AffinePoseDecoder(std::move(weight), std::vector<double>(6, 0.0), 6);
}

/// Features whose channel means equal the given 6-vector.
void fill_features(FeatureStack& f, int cam, const Vec3& axis_angle,
                   const Vec3& translation) {
  const double v[6] = {axis_angle.x(), axis_angle.y(), axis_angle.z(),
                       translation.x(), translation.y(), translation.z()};
  for (int c = 0; c < 6; ++c) {
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        f.at(cam, c, y, x) = static_cast<float>(v[c]);
      }
    }
  }
}

double max_transform_diff(const RigidTransform& a, const RigidTransform& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("rotation exponential") {
  CHECK((so3_exp(Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);
  // small angles use the series without losing orthonormality
  const Mat3 tiny = so3_exp(Vec3(1e-9, -2e-9, 5e-10));
  CHECK(orthonormality_drift(tiny) < 1e-15);
  // exp and log invert each other
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 40; ++i) {
    const Vec3 w(u(rng), u(rng), u(rng));
    CHECK((so3_log(so3_exp(w)) - w).norm() < 1e-9);
  }
}

TEST_CASE("adaptive weights") {
  FeatureStack f(3, 6, 4, 5);
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> val(-1.0f, 1.0f);
  for (float& v : f.data) v = val(rng);

  SUBCASE("zero weigher gives the uniform distribution") {
    const auto weights = adaptive_weights(
        f, [](const std::vector<double>&) {
          return std::vector<double>(3, 0.0);
        });
    for (double w : weights) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("softmax arithmetic") {
    FeatureStack two(2, 6, 4, 5);
    for (float& v : two.data) v = val(rng);
    const auto weights = adaptive_weights(
        two, [](const std::vector<double>&) {
          return std::vector<double>{std::log(2.0), 0.0};
        });
    CHECK(weights[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(weights[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("logit shifts cancel") {
    const auto base = adaptive_weights(
        f, [](const std::vector<double>&) {
          return std::vector<double>{0.3, -0.4, 1.2};
        });
    const auto shifted = adaptive_weights(
        f, [](const std::vector<double>&) {
          return std::vector<double>{100.3, 99.6, 101.2};
        });
    for (int i = 0; i < 3; ++i) {
      CHECK(base[i] == doctest::Approx(shifted[i]).epsilon(1e-9));
    }
  }
  SUBCASE("weights sum to one and are positive") {
    const auto weights = adaptive_weights(
        f, [](const std::vector<double>& pooled) {
          std::vector<double> logits(3);
          for (int i = 0; i < 3; ++i) logits[i] = 10.0 * pooled[i % 6];
          return logits;
        });
    double sum = 0.0;
    for (double w : weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  SUBCASE("camera permutation permutes nothing it should not") {
    // the pooled vector averages over cameras, so swapping camera blocks
    // leaves the logits unchanged
    FeatureStack swapped = f;
    for (std::size_t i = 0; i < f.per_camera(); ++i) {
      std::swap(swapped.data[i], swapped.data[f.per_camera() + i]);
    }
    auto xi = [](const std::vector<double>& pooled) {
      std::vector<double> logits(3);
      for (int i = 0; i < 3; ++i) logits[i] = pooled[i % 6] * (i + 1);
      return logits;
    };
    const auto a = adaptive_weights(f, xi);
    const auto b = adaptive_weights(swapped, xi);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]));
  }
}

TEST_CASE("motion strategies distribute one decoded motion") {
  const Rig rig = scattered_rig(4, 11);
  const AffinePoseDecoder decoder = passthrough_decoder();
  // exactly representable in float32 so the feature round trip is lossless
  const Vec3 w(0.0625, -0.125, 0.03125);
  const Vec3 t(0.25, 0.0, 0.875);
  FeatureStack f(4, 6, 3, 4);
  for (int cam = 0; cam < 4; ++cam) fill_features(f, cam, w, t);
  const RigidTransform motion(so3_exp(w), t);

  SUBCASE("identity extrinsics reproduce the decoded motion everywhere") {
    std::vector<Camera> cams;
    for (int i = 0; i < 4; ++i) {
      cams.push_back(Camera{i + 1, Intrinsics(100, 100, 50, 50),
                            RigidTransform(), 32, 32});
    }
    const Rig plain(std::move(cams));
    for (const RigidTransform& pose : joint_motion(f, decoder, plain)) {
      CHECK(max_transform_diff(pose, motion) < 1e-12);
    }
  }
  SUBCASE("identity decoded motion maps to identity poses") {
    FeatureStack zero(4, 6, 3, 4);
    for (const RigidTransform& pose : joint_motion(zero, decoder, rig)) {
      CHECK(max_transform_diff(pose, RigidTransform()) < 1e-12);
    }
  }
  SUBCASE("poses are the expected conjugate products") {
    const auto poses = joint_motion(f, decoder, rig);
    for (int id = 1; id <= 4; ++id) {
      const RigidTransform from_front = rig.camera_to_camera(1, id);
      const RigidTransform expected =
          compose(compose(from_front, motion), inverse(from_front));
      CHECK(max_transform_diff(poses[id - 1], expected) < 1e-12);
    }
  }
  SUBCASE("front strategy with identical extrinsics returns the motion") {
    std::vector<Camera> cams;
    const RigidTransform shared(
        Eigen::AngleAxisd(0.4, Vec3::UnitY()).toRotationMatrix(),
        Vec3(0.1, 0.2, 0.3));
    for (int i = 0; i < 4; ++i) {
      cams.push_back(
          Camera{i + 1, Intrinsics(100, 100, 50, 50), shared, 32, 32});
    }
    const Rig same(std::move(cams));
    for (const RigidTransform& pose : front_motion(f, decoder, same, false)) {
      CHECK(max_transform_diff(pose, motion) < 1e-12);
    }
  }
  SUBCASE("adaptive with uniform logits equals joint") {
    const auto a = adaptive_joint_motion(
        f,
        [](const std::vector<double>&) {
          return std::vector<double>(4, 0.7);
        },
        decoder, rig);
    const auto b = joint_motion(f, decoder, rig);
    for (int i = 0; i < 4; ++i) {
      CHECK(max_transform_diff(a[i], b[i]) < 1e-12);
    }
  }
}

TEST_CASE("strategies ignore the body-frame choice") {
  const Rig rig = scattered_rig(4, 13);
  const AffinePoseDecoder decoder = passthrough_decoder();
  std::mt19937 rng(17);
  std::uniform_real_distribution<float> val(-0.4f, 0.4f);
  FeatureStack f(4, 6, 3, 4);
  for (float& v : f.data) v = val(rng);

  const RigidTransform g(
      (Eigen::AngleAxisd(0.8, Vec3::UnitZ()) *
       Eigen::AngleAxisd(-0.3, Vec3::UnitX()))
          .toRotationMatrix(),
      Vec3(2.0, -1.0, 0.5));
  std::vector<Camera> moved_cams;
  for (int id = 1; id <= 4; ++id) {
    Camera cam = rig.camera(id);
    cam.extrinsics = compose(g, cam.extrinsics);
    moved_cams.push_back(cam);
  }
  const Rig moved(std::move(moved_cams));

  auto xi = [](const std::vector<double>& pooled) {
    std::vector<double> logits(4);
    for (int i = 0; i < 4; ++i) logits[i] = pooled[i % 6] * (1 + 0.2 * i);
    return logits;
  };

  const auto adaptive_a = adaptive_joint_motion(f, xi, decoder, rig);
  const auto adaptive_b = adaptive_joint_motion(f, xi, decoder, moved);
  const auto joint_a = joint_motion(f, decoder, rig);
  const auto joint_b = joint_motion(f, decoder, moved);
  const auto front_a = front_motion(f, decoder, rig, true);
  const auto front_b = front_motion(f, decoder, moved, true);
  const auto solo_a = per_camera_motion(f, decoder);
  const auto solo_b = per_camera_motion(f, decoder);
  for (int i = 0; i < 4; ++i) {
    CHECK(max_transform_diff(adaptive_a[i], adaptive_b[i]) < 1e-9);
    CHECK(max_transform_diff(joint_a[i], joint_b[i]) < 1e-9);
    CHECK(max_transform_diff(front_a[i], front_b[i]) < 1e-9);
    CHECK(max_transform_diff(solo_a[i], solo_b[i]) < 1e-9);
  }
}

TEST_CASE("single-camera joint motion is plain decoding") {
  const Rig solo({Camera{1, Intrinsics(100, 100, 50, 50),
                         RigidTransform(
                             Eigen::AngleAxisd(0.3, Vec3::UnitY())
                                 .toRotationMatrix(),
                             Vec3(0.4, 0.1, -0.2)),
                         32, 32}});
  const AffinePoseDecoder decoder = passthrough_decoder();
  FeatureStack f(1, 6, 2, 3);
  fill_features(f, 0, Vec3(0.0625, -0.125, 0.03125), Vec3(0.25, 0.0, 0.875));
  const auto joint = joint_motion(f, decoder, solo);
  const auto direct = per_camera_motion(f, decoder);
  CHECK(max_transform_diff(joint[0], direct[0]) < 1e-12);
}

TEST_CASE("weigher row relabeling permutes the weights") {
  FeatureStack f(3, 6, 4, 5);
  std::mt19937 rng(37);
  std::uniform_real_distribution<float> val(-1.0f, 1.0f);
  for (float& v : f.data) v = val(rng);
  auto xi = [](const std::vector<double>& pooled) {
    return std::vector<double>{pooled[0], 2.0 * pooled[1],
                               pooled[2] - pooled[3]};
  };
  auto xi_rotated = [](const std::vector<double>& pooled) {
    return std::vector<double>{pooled[2] - pooled[3], pooled[0],
                               2.0 * pooled[1]};
  };
  const auto base = adaptive_weights(f, xi);
  const auto rotated = adaptive_weights(f, xi_rotated);
  CHECK(rotated[0] == doctest::Approx(base[2]).epsilon(1e-12));
  CHECK(rotated[1] == doctest::Approx(base[0]).epsilon(1e-12));
  CHECK(rotated[2] == doctest::Approx(base[1]).epsilon(1e-12));
}

TEST_CASE("per-camera decoding stays uncoupled") {
  const AffinePoseDecoder decoder = passthrough_decoder();
  FeatureStack f(3, 6, 2, 2);
  fill_features(f, 0, Vec3(0.1, 0, 0), Vec3(1, 0, 0));
  fill_features(f, 1, Vec3(0.1, 0, 0), Vec3(1, 0, 0));
  fill_features(f, 2, Vec3(0, 0.2, 0), Vec3(0, 2, 0));
  const auto poses = per_camera_motion(f, decoder);
  CHECK(max_transform_diff(poses[0], poses[1]) == 0.0);
  CHECK(max_transform_diff(poses[0], poses[2]) > 0.1);
}

TEST_CASE("rig-consistent per-camera motions satisfy pose consistency") {
  const Rig rig = scattered_rig(4, 19);
  const AffinePoseDecoder decoder = passthrough_decoder();
  const RigidTransform body(
      (Eigen::AngleAxisd(0.05, Vec3::UnitY()) *
       Eigen::AngleAxisd(0.01, Vec3::UnitX()))
          .toRotationMatrix(),
      Vec3(0.02, 0.0, 0.4));
  FeatureStack f(4, 6, 2, 3);
  for (int id = 1; id <= 4; ++id) {
    const RigidTransform& e = rig.camera(id).extrinsics;
    const RigidTransform conjugate = compose(compose(inverse(e), body), e);
    fill_features(f, id - 1, so3_log(conjugate.rotation()),
                  conjugate.translation());
  }
  const auto poses = per_camera_motion(f, decoder);
  const LossWeights weights;
  CHECK(pose_consistency(poses, rig, weights).value < 1e-9);
}

TEST_CASE("reference decoder and weigher round-trip through files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "survgeo_test_motion";
  fs::create_directories(dir);

  // decoder: 6x4 weights
  ScalarMap w(6, 4);
  std::mt19937 rng(23);
  std::uniform_real_distribution<float> val(-0.5f, 0.5f);
  for (float& v : w.data) v = val(rng);
  ScalarMap b(1, 6);
  for (float& v : b.data) v = val(rng);
  write_pfm(w, (dir / "w.pfm").string());
  write_pfm(b, (dir / "b.pfm").string());
  {
    std::ofstream meta(dir / "decoder.json");
    meta << R"({"weights": "w.pfm", "bias": "b.pfm"})";
  }
  const AffinePoseDecoder decoder =
      load_pose_decoder((dir / "decoder.json").string());
  CHECK(decoder.channels() == 4);
  FeatureStack f(1, 4, 2, 2);
  for (float& v : f.data) v = val(rng);
  const RigidTransform pose =
      decoder(f.data.data(), f.channels, f.height, f.width);
  CHECK(orthonormality_drift(pose.rotation()) < 1e-12);
  // same input, same output
  const RigidTransform again =
      decoder(f.data.data(), f.channels, f.height, f.width);
  CHECK(max_transform_diff(pose, again) == 0.0);

  // weigher: 3 views x 4 channels
  ScalarMap ww(3, 4);
  for (float& v : ww.data) v = val(rng);
  ScalarMap wb(3, 1);
  for (float& v : wb.data) v = val(rng);
  write_pfm(ww, (dir / "ww.pfm").string());
  write_pfm(wb, (dir / "wb.pfm").string());
  {
    std::ofstream meta(dir / "weigher.json");
    meta << R"({"weights": "ww.pfm", "bias": "wb.pfm"})";
  }
  const AffineViewWeigher weigher =
      load_view_weigher((dir / "weigher.json").string());
  const std::vector<double> logits = weigher({0.1, 0.2, 0.3, 0.4});
  CHECK(logits.size() == 3);

  // shape mismatches are rejected
  CHECK_THROWS_AS(decoder(f.data.data(), 3, f.height, f.width), Error);
  CHECK_THROWS_AS(weigher({0.1, 0.2}), Error);
}
