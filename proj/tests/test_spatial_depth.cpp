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

#include "survgeo/spatial_depth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "survgeo/synth.hpp"

using namespace survgeo;

namespace {

struct TwoViewFixture {
  Rig rig;
  Scene scene;
  ScalarMap depth_target;  // camera 1
  ScalarMap depth_source;  // camera 2
  ViewPair pair;

  explicit TwoViewFixture(Scene s, double yaw, const Vec3& baseline)
      : rig(make_rig(yaw, baseline)), scene(std::move(s)) {
    depth_target = render_depth(scene, rig, RigidTransform(), 1);
    depth_source = render_depth(scene, rig, RigidTransform(), 2);
    pair.target = rig.camera(1).intrinsics;
    pair.source = rig.camera(2).intrinsics;
    pair.target_from_source = rig.camera_to_camera(2, 1);
  }

  static Rig make_rig(double yaw, const Vec3& baseline) {
    const int height = 96, width = 120;
    const Intrinsics k(110.0, 110.0, (width - 1) / 2.0, (height - 1) / 2.0);
    Camera a{1, k, RigidTransform(), height, width};
    Camera b{2, k,
             RigidTransform(
                 Eigen::AngleAxisd(yaw, Vec3::UnitY()).toRotationMatrix(),
                 baseline),
             height, width};
    return Rig({a, b});
  }
};

Scene plane_scene() {
  Scene scene;
  scene.primitives.emplace_back(
      Plane{Vec3(0.1, -0.15, 1.0).normalized(), 5.0});
  return scene;
}

Scene sphere_scene() {
  Scene scene;
  scene.primitives.emplace_back(Sphere{Vec3(0.3, -0.2, 1.0), 8.0});
  return scene;
}

/// Mean absolute relative error against the analytic target depth.
double relative_error(const ScalarMap& reconstructed,
                      const ScalarMap& truth) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!reconstructed.mask[i] || !truth.mask[i]) continue;
    sum += std::abs(static_cast<double>(reconstructed.data[i]) -
                    truth.data[i]) /
           truth.data[i];
    ++count;
  }
  REQUIRE(count > 500);
  return sum / count;
}

ScalarMap random_depth(int h, int w, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> val(2.0f, 9.0f);
  ScalarMap m(h, w);
  for (float& v : m.data) v = val(rng);
  return m;
}

}  // namespace

TEST_CASE("all strategies reproduce the source under identity") {
  const ScalarMap source = random_depth(24, 30, 77);
  const ScalarMap target = random_depth(24, 30, 78);  // values irrelevant
  ViewPair pair;
  pair.target = Intrinsics(90, 90, 14.5, 11.5);
  pair.source = pair.target;
  pair.target_from_source = RigidTransform();

  const ReconstructedDepth fw = reconstruct_fw(source, pair, 24, 30);
  const ReconstructedDepth bw = reconstruct_bw(source, pair, target);
  const ReconstructedDepth mbw = reconstruct_mbw(source, pair, target);
  const ReconstructedDepth mfbw = reconstruct_mfbw(source, pair, target);

  for (std::size_t i = 0; i < source.size(); ++i) {
    REQUIRE(fw.depth.mask[i] == 1);  // no holes
    REQUIRE(bw.depth.mask[i] == 1);
    REQUIRE(mbw.depth.mask[i] == 1);
    REQUIRE(mfbw.depth.mask[i] == 1);
    CHECK(fw.depth.data[i] == source.data[i]);
    CHECK(bw.depth.data[i] == source.data[i]);
    CHECK(mbw.depth.data[i] == source.data[i]);
    CHECK(mfbw.depth.data[i] == source.data[i]);
  }
}

TEST_CASE("forward warping keeps the nearest surface on collisions") {
  // two source pixels that project to the same target cell
  ScalarMap source(1, 2);
  source.at(0, 0) = 4.0f;
  source.at(0, 1) = 2.0f;
  ViewPair pair;
  pair.target = Intrinsics(10.0, 10.0, 0.0, 0.0);
  pair.source = Intrinsics(10.0, 10.0, 0.0, 0.0);
  // yaw the source so both pixels land near u=0; depth 2 wins
  const double yaw = std::atan2(1.0, 10.0);
  pair.target_from_source = RigidTransform(
      Eigen::AngleAxisd(-yaw, Vec3::UnitY()).toRotationMatrix(), Vec3::Zero());
  const ReconstructedDepth fw = reconstruct_fw(source, pair, 1, 1);
  REQUIRE(fw.depth.mask[0] == 1);
  CHECK(fw.depth.at(0, 0) < 2.1f);
}

TEST_CASE("plane scene: mbw reconstructs the analytic target depth") {
  const TwoViewFixture fx(plane_scene(), std::numbers::pi / 6.0,
                          Vec3(0.0, 0.0, 0.0));
  const ReconstructedDepth mbw =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  CHECK(relative_error(mbw.depth, fx.depth_target) < 0.01);
}

TEST_CASE("sphere scene: mbw stays within two percent") {
  const TwoViewFixture fx(sphere_scene(), std::numbers::pi / 7.0,
                          Vec3(0.25, 0.0, 0.1));
  const ReconstructedDepth mbw =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  CHECK(relative_error(mbw.depth, fx.depth_target) < 0.02);
}

TEST_CASE("fw splats within two percent of the analytic target depth") {
  const TwoViewFixture fx(plane_scene(), std::numbers::pi / 6.0,
                          Vec3(0.0, 0.0, 0.0));
  const ReconstructedDepth fw =
      reconstruct_fw(fx.depth_source, fx.pair, fx.depth_target.height,
                     fx.depth_target.width);
  double worst = 0.0;
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < fw.depth.size(); ++i) {
    if (!fw.depth.mask[i] || !fx.depth_target.mask[i]) continue;
    worst = std::max(worst,
                     std::abs(static_cast<double>(fw.depth.data[i]) -
                              fx.depth_target.data[i]) /
                         fx.depth_target.data[i]);
    ++hits;
  }
  REQUIRE(hits > 500);
  CHECK(worst < 0.02);
  // discretization leaves holes away from the identity case
  CHECK(mask_count(fw.depth.mask) <
        static_cast<std::int64_t>(fw.depth.size()));
}

TEST_CASE("bw transports the wrong frame's depth, mbw fixes it") {
  // lateral translation: source-frame z differs from target-frame z
  const TwoViewFixture fx(plane_scene(), std::numbers::pi / 8.0,
                          Vec3(0.4, 0.0, 0.0));
  const ReconstructedDepth bw =
      reconstruct_bw(fx.depth_source, fx.pair, fx.depth_target);
  const ReconstructedDepth mbw =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  const double bw_err = relative_error(bw.depth, fx.depth_target);
  const double mbw_err = relative_error(mbw.depth, fx.depth_target);
  CHECK(mbw_err < bw_err);
  CHECK(mbw_err < 0.01);
  CHECK(bw_err > 0.001);  // systematic, not noise
}

TEST_CASE("mfbw error sits between bw and mbw on smooth scenes") {
  const TwoViewFixture fx(plane_scene(), std::numbers::pi / 8.0,
                          Vec3(0.3, 0.0, 0.0));
  const ScalarMap truth = fx.depth_target;
  const ReconstructedDepth bw =
      reconstruct_bw(fx.depth_source, fx.pair, fx.depth_target);
  const ReconstructedDepth mbw =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  const ReconstructedDepth mfbw =
      reconstruct_mfbw(fx.depth_source, fx.pair, fx.depth_target);
  const double bw_err = relative_error(bw.depth, truth);
  const double mbw_err = relative_error(mbw.depth, truth);
  const double mfbw_err = relative_error(mfbw.depth, truth);
  CHECK(mfbw_err <= bw_err);
  CHECK(mbw_err <= mfbw_err + 1e-4);
}

TEST_CASE("mbw depends only on geometry") {
  // same geometry, two unrelated target-depth initializations for the
  // correspondences must not matter when both are the true depth; and the
  // reconstruction never reads image texture at all (type-level), so this
  // checks stability across reruns
  const TwoViewFixture fx(sphere_scene(), std::numbers::pi / 7.0,
                          Vec3(0.2, 0.0, 0.0));
  const ReconstructedDepth a =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  const ReconstructedDepth b =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  CHECK(a.depth.data == b.depth.data);
  CHECK(a.depth.mask == b.depth.mask);
}

TEST_CASE("empty overlap yields an all-invalid reconstruction") {
  // opposite-facing cameras share nothing
  const TwoViewFixture fx(sphere_scene(), std::numbers::pi,
                          Vec3(0.0, 0.0, 0.0));
  const ReconstructedDepth mbw =
      reconstruct_mbw(fx.depth_source, fx.pair, fx.depth_target);
  CHECK(mask_count(mbw.depth.mask) == 0);
  const ReconstructedDepth mfbw =
      reconstruct_mfbw(fx.depth_source, fx.pair, fx.depth_target);
  CHECK(mask_count(mfbw.depth.mask) == 0);
}

TEST_CASE("strategy dispatch validates inputs") {
  const ScalarMap source = random_depth(8, 8, 3);
  ViewPair pair;
  pair.target = Intrinsics(50, 50, 3.5, 3.5);
  pair.source = pair.target;
  pair.target_from_source = RigidTransform();
  CHECK_THROWS_AS(
      reconstruct(WarpStrategy::MBW, source, pair, nullptr, 8, 8), Error);
  CHECK(parse_strategy("mfbw") == WarpStrategy::MFBW);
  CHECK_THROWS_AS(parse_strategy("fbw"), Error);
}
