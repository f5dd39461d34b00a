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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "survgeo/image_io.hpp"
#include "survgeo/metrics.hpp"
#include "survgeo/pipeline.hpp"
#include "survgeo/synth.hpp"
#include "survgeo/warp.hpp"

namespace sg = survgeo;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitInput = 2;

sg::RigidTransform load_pose_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sg::ParseError(path, "", "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw sg::ParseError(path, "", e.what());
  }
  if (!doc.is_array() || doc.size() != 16) {
    throw sg::ParseError(path, "", "expected an array of 16 numbers");
  }
  sg::Mat4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (!doc[r * 4 + c].is_number()) {
        throw sg::ParseError(path, "", "expected numbers");
      }
      m(r, c) = doc[r * 4 + c].get<double>();
    }
  }
  try {
    return sg::RigidTransform::from_matrix(m);
  } catch (const sg::Error& e) {
    throw sg::ParseError(path, "", e.what());
  }
}

sg::Mask mask_from_pfm(const std::string& path) {
  const sg::ScalarMap m = sg::read_pfm(path);
  sg::Mask mask(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    mask[i] = (m.mask[i] && m.data[i] > 0.5f) ? 1 : 0;
  }
  return mask;
}

void write_json(const ordered_json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw sg::ParseError(out_path, "", "cannot open file for writing");
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string scene, rig, trajectory, out_dir;
};

int run_synth(const SynthArgs& args) {
  const sg::Scene scene = sg::load_scene(args.scene);
  const sg::Rig rig = sg::load_rig(args.rig);
  const sg::Trajectory traj = sg::load_trajectory(args.trajectory);
  for (const sg::Camera& cam : rig.cameras()) {
    const fs::path cam_dir =
        fs::path(args.out_dir) / ("cam" + std::to_string(cam.id));
    fs::create_directories(cam_dir);
    for (std::size_t t = 0; t < traj.poses.size(); ++t) {
      sg::ScalarMap depth =
          sg::render_depth(scene, rig, traj.poses[t], cam.id);
      const sg::ColorImage image =
          sg::render_image(scene, rig, traj.poses[t], cam.id);
      for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!depth.mask[i]) {
          depth.data[i] = std::numeric_limits<float>::infinity();
        }
      }
      const std::string base = "frame" + std::to_string(t);
      sg::write_pfm(depth, (cam_dir / (base + ".pfm")).string());
      sg::write_ppm(image, (cam_dir / (base + ".ppm")).string());
    }
  }
  return 0;
}

// ----------------------------------------------------------------- warp

struct WarpArgs {
  std::string rig, depth, source_image, target_image, pose;
  std::string context = "spatial";
  int target_camera = 0;
  int source_camera = 0;
  std::string out_image, out_validity;
};

int run_warp(const WarpArgs& args) {
  const sg::Rig rig = sg::load_rig(args.rig);
  const sg::ScalarMap depth = sg::read_pfm(args.depth);
  const sg::ColorImage source = sg::read_ppm(args.source_image);

  sg::ContextKind kind;
  if (args.context == "temporal") {
    kind = sg::ContextKind::Temporal;
  } else if (args.context == "spatial") {
    kind = sg::ContextKind::Spatial;
  } else if (args.context == "spatial-temporal") {
    kind = sg::ContextKind::SpatialTemporal;
  } else {
    throw sg::Error(sg::Errc::InvalidArgument,
                    "unknown context '" + args.context + "'");
  }

  std::vector<sg::RigidTransform> poses(rig.size());
  if (!args.pose.empty()) {
    poses[args.source_camera - 1] = load_pose_file(args.pose);
  } else if (kind != sg::ContextKind::Spatial) {
    throw sg::Error(sg::Errc::InvalidArgument,
                    "--pose is required for temporal contexts");
  }

  const sg::RigidTransform x = sg::context_transform(
      kind, args.target_camera, args.source_camera, rig, poses);
  const sg::Intrinsics& k_target =
      rig.camera(args.target_camera).intrinsics;
  const sg::Intrinsics& k_source =
      rig.camera(args.source_camera).intrinsics;
  const sg::CoordGrid coords = sg::warp_coords(depth, k_target, k_source, x);
  const sg::WarpResult result = sg::synthesize(source, coords);
  sg::write_ppm(result.synthesized, args.out_image);
  sg::write_mask_pfm(result.validity, coords.height, coords.width,
                     args.out_validity);

  if (!args.target_image.empty()) {
    const sg::ColorImage target = sg::read_ppm(args.target_image);
    const sg::LossTerm term =
        sg::context_photometric_term(target, {&result}, 0.85);
    std::cout << "photometric_error " << term.value << " over " << term.count
              << " pixels\n";
  }
  return 0;
}

// ----------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string rig, source_depth, target_depth;
  std::string strategy = "mbw";
  int target_camera = 0;
  int source_camera = 0;
  std::string out_depth, out_mask;
};

int run_reconstruct(const ReconstructArgs& args) {
  const sg::Rig rig = sg::load_rig(args.rig);
  const sg::ScalarMap source_depth = sg::read_pfm(args.source_depth);
  const sg::WarpStrategy strategy = sg::parse_strategy(args.strategy);
  sg::ViewPair pair;
  pair.target = rig.camera(args.target_camera).intrinsics;
  pair.source = rig.camera(args.source_camera).intrinsics;
  pair.target_from_source =
      rig.camera_to_camera(args.source_camera, args.target_camera);

  std::optional<sg::ScalarMap> target_depth;
  if (!args.target_depth.empty()) {
    target_depth = sg::read_pfm(args.target_depth);
  }
  const sg::Camera& cam = rig.camera(args.target_camera);
  sg::ReconstructedDepth result = sg::reconstruct(
      strategy, source_depth, pair,
      target_depth.has_value() ? &*target_depth : nullptr, cam.height,
      cam.width);
  // holes encode as +inf so readers see them as invalid, like sky in synth
  for (std::size_t i = 0; i < result.depth.size(); ++i) {
    if (!result.depth.mask[i]) {
      result.depth.data[i] = std::numeric_limits<float>::infinity();
    }
  }
  sg::write_pfm(result.depth, args.out_depth);
  sg::write_mask_pfm(result.depth.mask, result.depth.height,
                     result.depth.width, args.out_mask);
  return 0;
}

// -------------------------------------------------------------- normals

struct NormalsArgs {
  std::string rig, depth, out;
  int camera = 0;
};

int run_normals(const NormalsArgs& args) {
  const sg::Rig rig = sg::load_rig(args.rig);
  const sg::ScalarMap depth = sg::read_pfm(args.depth);
  const sg::VectorMap normals =
      sg::normal_map(depth, rig.camera(args.camera).intrinsics);
  sg::write_pfm3(normals, args.out);
  return 0;
}

// --------------------------------------------------------- pseudo-depth

struct PseudoArgs {
  std::string disparity, out;
  double min_depth = 0.1;
  double max_depth = 200.0;
};

int run_pseudo_depth(const PseudoArgs& args) {
  const sg::ScalarMap raw = sg::read_pfm(args.disparity);
  const sg::ScalarMap depth =
      sg::pseudo_depth(raw, sg::PseudoDepthConfig(args.min_depth,
                                                  args.max_depth));
  sg::write_pfm(depth, args.out);
  return 0;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred, gt, out;
  double min_depth = 0.1;
  double max_depth = 200.0;  // predictions are clamped to this range
  bool median_scale = false;
};

int run_eval(const EvalArgs& args) {
  const sg::ScalarMap pred = sg::read_pfm(args.pred);
  const sg::ScalarMap gt = sg::read_pfm(args.gt);
  const sg::MetricReport report =
      sg::evaluate(pred, gt, args.min_depth, args.max_depth,
                   args.median_scale);
  ordered_json doc;
  doc["abs_rel"] = report.abs_rel;
  doc["sq_rel"] = report.sq_rel;
  doc["rmse"] = report.rmse;
  doc["rmse_log"] = report.rmse_log;
  doc["delta1"] = report.delta1;
  doc["delta2"] = report.delta2;
  doc["delta3"] = report.delta3;
  doc["n"] = report.n;
  write_json(doc, args.out);
  return 0;
}

// ----------------------------------------------------------------- loss

struct LossArgs {
  std::string manifest, out;
};

const std::vector<std::string> kManifestKeys = {
    "rig", "strategy", "pseudo_depth_range", "weights", "cameras"};
const std::vector<std::string> kCameraKeys = {
    "id",          "image",          "depth",
    "temporal_images", "poses",      "raw_disparity",
    "occlusion_mask",  "spatial_neighbors"};
const std::vector<std::string> kWeightKeys = {
    "alpha",     "lambda_t",  "lambda_s",  "lambda_st", "lambda_mvrc",
    "omega_p",   "omega_s",   "omega_sdc", "omega_snc", "omega_dsc",
    "kappa_src", "kappa_snc", "mu",        "alpha_t",   "alpha_r"};

void reject_unknown_keys(const nlohmann::json& node,
                         const std::vector<std::string>& allowed,
                         const std::string& file, const std::string& where) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) ==
        allowed.end()) {
      throw sg::ParseError(file, where + "." + it.key(), "unknown key");
    }
  }
}

sg::LossWeights parse_weights(const nlohmann::json& node,
                              const std::string& file) {
  reject_unknown_keys(node, kWeightKeys, file, "weights");
  sg::LossWeights w;
  auto get = [&](const char* key, double& slot) {
    if (node.contains(key)) {
      if (!node[key].is_number()) {
        throw sg::ParseError(file, std::string("weights.") + key,
                             "expected a number");
      }
      slot = node[key].get<double>();
    }
  };
  get("alpha", w.alpha);
  get("lambda_t", w.lambda_t);
  get("lambda_s", w.lambda_s);
  get("lambda_st", w.lambda_st);
  get("lambda_mvrc", w.lambda_mvrc);
  get("omega_p", w.omega_p);
  get("omega_s", w.omega_s);
  get("omega_sdc", w.omega_sdc);
  get("omega_snc", w.omega_snc);
  get("omega_dsc", w.omega_dsc);
  get("kappa_src", w.kappa_src);
  get("kappa_snc", w.kappa_snc);
  get("mu", w.mu);
  get("alpha_t", w.alpha_t);
  get("alpha_r", w.alpha_r);
  return w;
}

int run_loss(const LossArgs& args) {
  const std::string path = args.manifest;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sg::ParseError(path, "", "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw sg::ParseError(path, "", e.what());
  }
  if (!doc.is_object()) throw sg::ParseError(path, "", "expected an object");
  reject_unknown_keys(doc, kManifestKeys, path, "manifest");

  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& rel) {
    return (base / rel).string();
  };

  if (!doc.contains("rig") || !doc["rig"].is_string()) {
    throw sg::ParseError(path, "rig", "expected a file path");
  }
  sg::Rig rig = sg::load_rig(resolve(doc["rig"].get<std::string>()));

  sg::WarpStrategy strategy = sg::WarpStrategy::MBW;
  if (doc.contains("strategy")) {
    if (!doc["strategy"].is_string()) {
      throw sg::ParseError(path, "strategy", "expected a string");
    }
    try {
      strategy = sg::parse_strategy(doc["strategy"].get<std::string>());
    } catch (const sg::Error& e) {
      throw sg::ParseError(path, "strategy", e.what());
    }
  }

  sg::PseudoDepthConfig pseudo_cfg;
  if (doc.contains("pseudo_depth_range")) {
    const nlohmann::json& r = doc["pseudo_depth_range"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() ||
        !r[1].is_number()) {
      throw sg::ParseError(path, "pseudo_depth_range",
                           "expected [min_depth, max_depth]");
    }
    try {
      pseudo_cfg = sg::PseudoDepthConfig(r[0].get<double>(),
                                         r[1].get<double>());
    } catch (const sg::Error& e) {
      throw sg::ParseError(path, "pseudo_depth_range", e.what());
    }
  }

  sg::LossWeights weights;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_object()) {
      throw sg::ParseError(path, "weights", "expected an object");
    }
    weights = parse_weights(doc["weights"], path);
  }

  if (!doc.contains("cameras") || !doc["cameras"].is_array() ||
      doc["cameras"].empty()) {
    throw sg::ParseError(path, "cameras", "expected a non-empty array");
  }
  std::vector<sg::CameraFrameData> cameras(rig.size());
  std::vector<bool> seen(rig.size(), false);
  for (std::size_t ci = 0; ci < doc["cameras"].size(); ++ci) {
    const std::string where = "cameras[" + std::to_string(ci) + "]";
    const nlohmann::json& c = doc["cameras"][ci];
    if (!c.is_object()) throw sg::ParseError(path, where, "expected object");
    reject_unknown_keys(c, kCameraKeys, path, where);
    if (!c.contains("id") || !c["id"].is_number_integer()) {
      throw sg::ParseError(path, where + ".id", "expected an integer");
    }
    const int id = c["id"].get<int>();
    if (id < 1 || id > rig.size() || seen[id - 1]) {
      throw sg::ParseError(path, where + ".id",
                           "id must name each rig camera exactly once");
    }
    seen[id - 1] = true;
    sg::CameraFrameData& data = cameras[id - 1];
    for (const char* key : {"image", "depth"}) {
      if (!c.contains(key) || !c[key].is_string()) {
        throw sg::ParseError(path, where + "." + key, "expected a file path");
      }
    }
    data.image = sg::read_ppm(resolve(c["image"].get<std::string>()));
    data.depth = sg::read_pfm(resolve(c["depth"].get<std::string>()));
    if (c.contains("temporal_images")) {
      if (!c["temporal_images"].is_array()) {
        throw sg::ParseError(path, where + ".temporal_images",
                             "expected an array of file paths");
      }
      for (const auto& t : c["temporal_images"]) {
        if (!t.is_string()) {
          throw sg::ParseError(path, where + ".temporal_images",
                               "expected file paths");
        }
        data.temporal_images.push_back(
            sg::read_ppm(resolve(t.get<std::string>())));
      }
    }
    if (c.contains("poses")) {
      if (!c["poses"].is_array()) {
        throw sg::ParseError(path, where + ".poses",
                             "expected an array of 16-number arrays");
      }
      for (std::size_t pi = 0; pi < c["poses"].size(); ++pi) {
        const nlohmann::json& p = c["poses"][pi];
        if (!p.is_array() || p.size() != 16) {
          throw sg::ParseError(path,
                               where + ".poses[" + std::to_string(pi) + "]",
                               "expected 16 row-major numbers");
        }
        sg::Mat4 m;
        for (int r = 0; r < 4; ++r) {
          for (int col = 0; col < 4; ++col) {
            if (!p[r * 4 + col].is_number()) {
              throw sg::ParseError(
                  path, where + ".poses[" + std::to_string(pi) + "]",
                  "expected numbers");
            }
            m(r, col) = p[r * 4 + col].get<double>();
          }
        }
        try {
          data.poses.push_back(sg::RigidTransform::from_matrix(m));
        } catch (const sg::Error& e) {
          throw sg::ParseError(path,
                               where + ".poses[" + std::to_string(pi) + "]",
                               e.what());
        }
      }
    }
    if (c.contains("raw_disparity")) {
      if (!c["raw_disparity"].is_string()) {
        throw sg::ParseError(path, where + ".raw_disparity",
                             "expected a file path");
      }
      data.raw_disparity =
          sg::read_pfm(resolve(c["raw_disparity"].get<std::string>()));
    }
    if (c.contains("occlusion_mask")) {
      if (!c["occlusion_mask"].is_string()) {
        throw sg::ParseError(path, where + ".occlusion_mask",
                             "expected a file path");
      }
      data.occlusion =
          mask_from_pfm(resolve(c["occlusion_mask"].get<std::string>()));
    }
    if (c.contains("spatial_neighbors")) {
      if (!c["spatial_neighbors"].is_array()) {
        throw sg::ParseError(path, where + ".spatial_neighbors",
                             "expected an array of camera ids");
      }
      for (const auto& njson : c["spatial_neighbors"]) {
        if (!njson.is_number_integer()) {
          throw sg::ParseError(path, where + ".spatial_neighbors",
                               "expected integers");
        }
        data.spatial_neighbors.push_back(njson.get<int>());
      }
    }
  }
  for (int i = 0; i < rig.size(); ++i) {
    if (!seen[i]) {
      throw sg::ParseError(path, "cameras",
                           "missing entry for camera " + std::to_string(i + 1));
    }
  }

  sg::FrameSet frames(std::move(rig), std::move(cameras));
  const sg::FrameLossResult result =
      sg::compute_frame_losses(frames, weights, strategy, pseudo_cfg);

  ordered_json out;
  out["strategy"] = sg::strategy_name(strategy);
  ordered_json wj;
  wj["alpha"] = weights.alpha;
  wj["lambda_t"] = weights.lambda_t;
  wj["lambda_s"] = weights.lambda_s;
  wj["lambda_st"] = weights.lambda_st;
  wj["lambda_mvrc"] = weights.lambda_mvrc;
  wj["omega_p"] = weights.omega_p;
  wj["omega_s"] = weights.omega_s;
  wj["omega_sdc"] = weights.omega_sdc;
  wj["omega_snc"] = weights.omega_snc;
  wj["omega_dsc"] = weights.omega_dsc;
  wj["kappa_src"] = weights.kappa_src;
  wj["kappa_snc"] = weights.kappa_snc;
  wj["mu"] = weights.mu;
  wj["alpha_t"] = weights.alpha_t;
  wj["alpha_r"] = weights.alpha_r;
  out["weights"] = wj;
  out["terms"] = ordered_json::array();
  for (const sg::LossReport::Entry& e : result.report.terms) {
    ordered_json t;
    t["name"] = e.name;
    t["value"] = e.value;
    t["count"] = e.count;
    t["weight"] = e.weight;
    out["terms"].push_back(t);
  }
  out["total"] = result.report.total;
  if (result.pose_consistency.has_value()) {
    ordered_json pcc;
    pcc["value"] = result.pose_consistency->value;
    pcc["gimbal_lock"] = result.pose_consistency->gimbal_lock;
    out["pose_consistency"] = pcc;
  }
  write_json(out, args.out);
  return 0;
}

// ------------------------------------------------------------ invariance

struct InvarianceArgs {
  std::string check;
  std::string rig, depth, prior, scene;
  int camera = 1;
  int source = 1;
  int target = 2;
};

int run_invariance(const InvarianceArgs& args) {
  if (args.check == "normal-scale") {
    const sg::Rig rig = sg::load_rig(args.rig);
    const sg::ScalarMap depth = sg::read_pfm(args.depth);
    const sg::Intrinsics& k = rig.camera(args.camera).intrinsics;
    const sg::VectorMap reference = sg::normal_map(depth, k);
    double worst = 0.0;
    for (double scale : {0.5, 2.0, 10.0}) {
      const sg::VectorMap scaled = sg::normal_map_scaled(depth, k, scale);
      for (int y = 0; y < reference.height; ++y) {
        for (int x = 0; x < reference.width; ++x) {
          if (!reference.valid(y, x) || !scaled.valid(y, x)) continue;
          double ab = 0.0, aa = 0.0, bb = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double a = reference.at(y, x, c);
            const double b = scaled.at(y, x, c);
            ab += a * b;
            aa += a * a;
            bb += b * b;
          }
          const double cosine =
              std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
          worst = std::max(worst, std::acos(cosine));
        }
      }
    }
    std::cout << "max angular deviation " << worst << " rad\n";
    if (!(worst < 1e-6)) {
      std::cerr << "normal-scale invariance violated\n";
      return kExitComputation;
    }
    return 0;
  }
  if (args.check == "dsc-scale") {
    const sg::ScalarMap depth = sg::read_pfm(args.depth);
    const sg::ScalarMap prior = sg::read_pfm(args.prior);
    const double reference = sg::dsc(depth, prior).value;
    double worst = 0.0;
    for (float scale : {0.5f, 2.0f, 4.0f}) {  // exact in float32
      sg::ScalarMap scaled = depth;
      for (float& v : scaled.data) v *= scale;
      worst = std::max(worst,
                       std::abs(sg::dsc(scaled, prior).value - reference));
    }
    std::cout << "max value deviation " << worst << "\n";
    if (!(worst < 1e-6)) {
      std::cerr << "dsc scale invariance violated\n";
      return kExitComputation;
    }
    return 0;
  }
  if (args.check == "warp-roundtrip") {
    const sg::Rig rig = sg::load_rig(args.rig);
    const sg::Scene scene = sg::load_scene(args.scene);
    const sg::RigidTransform identity;
    const sg::ScalarMap d_src =
        sg::render_depth(scene, rig, identity, args.source);
    const sg::ScalarMap d_tgt =
        sg::render_depth(scene, rig, identity, args.target);
    const sg::Intrinsics& k_src = rig.camera(args.source).intrinsics;
    const sg::Intrinsics& k_tgt = rig.camera(args.target).intrinsics;
    const sg::RigidTransform x =
        rig.camera_to_camera(args.source, args.target);
    const sg::CoordGrid fwd = sg::warp_coords(d_src, k_src, k_tgt, x);
    const sg::CoordGrid back =
        sg::warp_coords(d_tgt, k_tgt, k_src, sg::inverse(x));

    sg::ScalarMap back_u(back.height, back.width, 0.0f, false);
    sg::ScalarMap back_v(back.height, back.width, 0.0f, false);
    for (std::size_t i = 0; i < back.valid.size(); ++i) {
      back_u.data[i] = static_cast<float>(back.u[i]);
      back_v.data[i] = static_cast<float>(back.v[i]);
      back_u.mask[i] = back.valid[i];
      back_v.mask[i] = back.valid[i];
    }
    const sg::ScalarMap ret_u = sg::bilinear_sample(back_u, fwd);
    const sg::ScalarMap ret_v = sg::bilinear_sample(back_v, fwd);
    double worst = 0.0;
    std::int64_t checked = 0;
    for (int y = 0; y < fwd.height; ++y) {
      for (int x2 = 0; x2 < fwd.width; ++x2) {
        const std::size_t i = fwd.index(y, x2);
        if (!ret_u.mask[i] || !ret_v.mask[i]) continue;
        const double du = static_cast<double>(ret_u.data[i]) - x2;
        const double dv = static_cast<double>(ret_v.data[i]) - y;
        worst = std::max(worst, std::hypot(du, dv));
        ++checked;
      }
    }
    std::cout << "max round-trip deviation " << worst << " px over "
              << checked << " pixels\n";
    if (checked == 0) {
      std::cerr << "views do not overlap\n";
      return kExitComputation;
    }
    if (!(worst < 0.51)) {
      std::cerr << "warp round-trip bound violated\n";
      return kExitComputation;
    }
    return 0;
  }
  throw sg::Error(sg::Errc::InvalidArgument,
                  "unknown check '" + args.check + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric self-supervision toolkit for surround-view depth"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Render an analytic scene into per-camera frame sets");
  synth->add_option("--scene", synth_args.scene, "scene JSON")->required();
  synth->add_option("--rig", synth_args.rig, "rig JSON")->required();
  synth->add_option("--trajectory", synth_args.trajectory, "trajectory JSON")
      ->required();
  synth
      ->add_option("--out-dir", synth_args.out_dir,
                   "output directory (cam<id>/frame<t>.{ppm,pfm})")
      ->required();

  WarpArgs warp_args;
  CLI::App* warp = app.add_subcommand(
      "warp", "Synthesize a target view from a source image");
  warp->add_option("--rig", warp_args.rig, "rig JSON")->required();
  warp->add_option("--target-camera", warp_args.target_camera)->required();
  warp->add_option("--source-camera", warp_args.source_camera)->required();
  warp->add_option("--context", warp_args.context,
                   "temporal | spatial | spatial-temporal");
  warp->add_option("--depth", warp_args.depth, "target-view depth PFM")
      ->required();
  warp->add_option("--source-image", warp_args.source_image, "source PPM")
      ->required();
  warp->add_option("--target-image", warp_args.target_image,
                   "optional target PPM; prints the photometric error");
  warp->add_option("--pose", warp_args.pose,
                   "JSON 16-number source-camera motion (temporal contexts)");
  warp->add_option("--out-image", warp_args.out_image)->required();
  warp->add_option("--out-validity", warp_args.out_validity)->required();

  ReconstructArgs rec_args;
  CLI::App* rec = app.add_subcommand(
      "reconstruct", "Reproject an adjacent view's depth into a target view");
  rec->add_option("--rig", rec_args.rig, "rig JSON")->required();
  rec->add_option("--target-camera", rec_args.target_camera)->required();
  rec->add_option("--source-camera", rec_args.source_camera)->required();
  rec->add_option("--strategy", rec_args.strategy, "fw | bw | mbw | mfbw");
  rec->add_option("--source-depth", rec_args.source_depth)->required();
  rec->add_option("--target-depth", rec_args.target_depth,
                  "required for bw/mbw/mfbw");
  rec->add_option("--out-depth", rec_args.out_depth)->required();
  rec->add_option("--out-mask", rec_args.out_mask)->required();

  NormalsArgs normals_args;
  CLI::App* normals =
      app.add_subcommand("normals", "Surface normal map from depth");
  normals->add_option("--rig", normals_args.rig, "rig JSON")->required();
  normals->add_option("--camera", normals_args.camera)->required();
  normals->add_option("--depth", normals_args.depth)->required();
  normals->add_option("--out", normals_args.out, "3-channel PFM")->required();

  PseudoArgs pseudo_args;
  CLI::App* pseudo = app.add_subcommand(
      "pseudo-depth", "Depth from raw scale/shift-ambiguous disparity");
  pseudo->add_option("--disparity", pseudo_args.disparity)->required();
  pseudo->add_option("--min-depth", pseudo_args.min_depth);
  pseudo->add_option("--max-depth", pseudo_args.max_depth);
  pseudo->add_option("--out", pseudo_args.out)->required();

  LossArgs loss_args;
  CLI::App* loss = app.add_subcommand(
      "loss", "Evaluate the loss suite over a manifest of inputs");
  loss->add_option("--manifest", loss_args.manifest)->required();
  loss->add_option("--out", loss_args.out, "report path (default: stdout)");

  EvalArgs eval_args;
  CLI::App* eval =
      app.add_subcommand("eval", "Depth metrics against ground truth");
  eval->add_option("--pred", eval_args.pred)->required();
  eval->add_option("--gt", eval_args.gt)->required();
  eval->add_option("--min-depth", eval_args.min_depth);
  eval->add_option("--max-depth", eval_args.max_depth,
                   "predictions are clamped to [min, max]");
  eval->add_flag("--median-scale", eval_args.median_scale,
                 "scale predictions by median(gt)/median(pred)");
  eval->add_option("--out", eval_args.out, "report path (default: stdout)");

  InvarianceArgs inv_args;
  CLI::App* inv = app.add_subcommand(
      "invariance", "Run a provable-property check");
  inv->add_option("--check", inv_args.check,
                  "normal-scale | dsc-scale | warp-roundtrip")
      ->required();
  inv->add_option("--rig", inv_args.rig);
  inv->add_option("--camera", inv_args.camera);
  inv->add_option("--depth", inv_args.depth);
  inv->add_option("--prior", inv_args.prior);
  inv->add_option("--scene", inv_args.scene);
  inv->add_option("--source", inv_args.source);
  inv->add_option("--target", inv_args.target);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (synth->parsed()) return run_synth(synth_args);
    if (warp->parsed()) return run_warp(warp_args);
    if (rec->parsed()) return run_reconstruct(rec_args);
    if (normals->parsed()) return run_normals(normals_args);
    if (pseudo->parsed()) return run_pseudo_depth(pseudo_args);
    if (loss->parsed()) return run_loss(loss_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (inv->parsed()) return run_invariance(inv_args);
  } catch (const sg::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const sg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return 0;
}
