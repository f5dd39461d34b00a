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

#include "survgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace survgeo {

namespace {

constexpr double kOrthoTolerance = 1e-9;
constexpr double kRenormalizeDrift = 1e-7;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveDepth: return "NonPositiveDepth";
    case Errc::CameraMismatch: return "CameraMismatch";
    case Errc::DegenerateSize: return "DegenerateSize";
    case Errc::AllInvalid: return "AllInvalid";
    case Errc::ConstantMap: return "ConstantMap";
    case Errc::DegenerateSurface: return "DegenerateSurface";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MissingTerm: return "MissingTerm";
    case Errc::GimbalLock: return "GimbalLock";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonDivisibleSpatial: return "NonDivisibleSpatial";
    case Errc::NoValidGroundTruth: return "NoValidGroundTruth";
    case Errc::InvalidTransform: return "InvalidTransform";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

Intrinsics::Intrinsics(double fx_, double fy_, double cx_, double cy_)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(Errc::InvalidArgument, "focal lengths must be positive");
  }
  if (!finite(cx) || !finite(cy)) {
    throw Error(Errc::InvalidArgument, "principal point must be finite");
  }
}

Vec2 project(const Intrinsics& k, const Vec3& p) {
  if (!(p.z() > kDepthEpsilon)) {
    throw Error(Errc::NonPositiveDepth,
                "projection of point with z = " + std::to_string(p.z()));
  }
  return Vec2(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
}

Vec3 unproject(const Intrinsics& k, const Vec2& pixel, double depth) {
  if (!(depth > 0.0)) {
    throw Error(Errc::NonPositiveDepth,
                "unprojection at depth = " + std::to_string(depth));
  }
  return Vec3((pixel.x() - k.cx) / k.fx * depth,
              (pixel.y() - k.cy) / k.fy * depth, depth);
}

double orthonormality_drift(const Mat3& r) {
  Mat3 residual = r.transpose() * r - Mat3::Identity();
  return residual.cwiseAbs().maxCoeff();
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation_.allFinite() || !translation_.allFinite()) {
    throw Error(Errc::InvalidTransform, "non-finite transform entries");
  }
  if (orthonormality_drift(rotation_) > kOrthoTolerance) {
    throw Error(Errc::InvalidTransform, "rotation is not orthonormal");
  }
  if (std::abs(rotation_.determinant() - 1.0) > kOrthoTolerance) {
    throw Error(Errc::InvalidTransform, "rotation determinant is not +1");
  }
}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  if (std::abs(m(3, 0)) > 0.0 || std::abs(m(3, 1)) > 0.0 ||
      std::abs(m(3, 2)) > 0.0 || std::abs(m(3, 3) - 1.0) > 1e-12) {
    throw Error(Errc::InvalidTransform, "bottom row must be [0 0 0 1]");
  }
  return RigidTransform(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  Mat3 r = a.rotation_ * b.rotation_;
  Vec3 t = a.rotation_ * b.translation_ + a.translation_;
  if (orthonormality_drift(r) > kRenormalizeDrift) {
    r = nearest_rotation(r);
  }
  return RigidTransform(r, t, RigidTransform::Unchecked{});
}

RigidTransform inverse(const RigidTransform& t) {
  Mat3 rt = t.rotation_.transpose();
  return RigidTransform(rt, -(rt * t.translation_),
                        RigidTransform::Unchecked{});
}

const char* context_name(ContextKind kind) {
  switch (kind) {
    case ContextKind::Temporal: return "temporal";
    case ContextKind::Spatial: return "spatial";
    case ContextKind::SpatialTemporal: return "spatial-temporal";
  }
  return "unknown";
}

Rig::Rig(std::vector<Camera> cameras) : cameras_(std::move(cameras)) {
  if (cameras_.empty()) {
    throw Error(Errc::InvalidArgument, "rig needs at least one camera");
  }
  std::sort(cameras_.begin(), cameras_.end(),
            [](const Camera& a, const Camera& b) { return a.id < b.id; });
  for (int i = 0; i < size(); ++i) {
    const Camera& cam = cameras_[i];
    if (cam.id != i + 1) {
      throw Error(Errc::InvalidArgument,
                  "camera ids must be unique and contiguous from 1");
    }
    if (cam.height <= 0 || cam.width <= 0) {
      throw Error(Errc::InvalidArgument,
                  "camera " + std::to_string(cam.id) +
                      " has non-positive resolution");
    }
  }
}

const Camera& Rig::camera(int id) const {
  if (id < 1 || id > size()) {
    throw Error(Errc::InvalidArgument,
                "camera id " + std::to_string(id) + " out of range");
  }
  return cameras_[id - 1];
}

RigidTransform Rig::camera_to_camera(int from_id, int to_id) const {
  return compose(inverse(camera(to_id).extrinsics),
                 camera(from_id).extrinsics);
}

RigidTransform context_transform(ContextKind kind, int camera_i, int camera_j,
                                 const Rig& rig,
                                 const std::vector<RigidTransform>& poses) {
  auto pose_of = [&](int id) -> const RigidTransform& {
    rig.camera(id);  // range check
    if (static_cast<int>(poses.size()) < rig.size()) {
      throw Error(Errc::InvalidArgument, "one pose per camera is required");
    }
    return poses[id - 1];
  };
  switch (kind) {
    case ContextKind::Temporal:
      if (camera_i != camera_j) {
        throw Error(Errc::CameraMismatch,
                    "temporal context requires i == j, got " +
                        std::to_string(camera_i) + " and " +
                        std::to_string(camera_j));
      }
      return pose_of(camera_i);
    case ContextKind::Spatial:
      return rig.camera_to_camera(camera_i, camera_j);
    case ContextKind::SpatialTemporal:
      return compose(pose_of(camera_j),
                     rig.camera_to_camera(camera_i, camera_j));
  }
  throw Error(Errc::InvalidArgument, "unknown context kind");
}

namespace {

using nlohmann::json;

double require_number(const json& node, const std::string& file,
                      const std::string& field) {
  if (!node.is_number()) {
    throw ParseError(file, field, "expected a number");
  }
  return node.get<double>();
}

int require_int(const json& node, const std::string& file,
                const std::string& field) {
  if (!node.is_number_integer()) {
    throw ParseError(file, field, "expected an integer");
  }
  return node.get<int>();
}

}  // namespace

Rig load_rig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, "", "cannot open file");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, "", e.what());
  }
  if (!doc.is_object() || !doc.contains("cameras")) {
    throw ParseError(path, "cameras", "missing camera list");
  }
  const json& list = doc["cameras"];
  if (!list.is_array() || list.empty()) {
    throw ParseError(path, "cameras", "expected a non-empty array");
  }
  std::vector<Camera> cameras;
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string base = "cameras[" + std::to_string(i) + "]";
    const json& c = list[i];
    if (!c.is_object()) {
      throw ParseError(path, base, "expected an object");
    }
    for (const char* key :
         {"id", "fx", "fy", "cx", "cy", "height", "width", "extrinsics"}) {
      if (!c.contains(key)) {
        throw ParseError(path, base + "." + key, "missing field");
      }
    }
    Camera cam;
    cam.id = require_int(c["id"], path, base + ".id");
    double fx = require_number(c["fx"], path, base + ".fx");
    double fy = require_number(c["fy"], path, base + ".fy");
    double cx = require_number(c["cx"], path, base + ".cx");
    double cy = require_number(c["cy"], path, base + ".cy");
    if (!(fx > 0.0) || !(fy > 0.0)) {
      throw ParseError(path, base + ".fx", "focal lengths must be positive");
    }
    cam.intrinsics = Intrinsics(fx, fy, cx, cy);
    cam.height = require_int(c["height"], path, base + ".height");
    cam.width = require_int(c["width"], path, base + ".width");
    if (cam.height <= 0 || cam.width <= 0) {
      throw ParseError(path, base + ".height", "resolution must be positive");
    }
    const json& ext = c["extrinsics"];
    if (!ext.is_array() || ext.size() != 16) {
      throw ParseError(path, base + ".extrinsics",
                       "expected 16 row-major numbers (4x4 body-from-camera)");
    }
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      for (int col = 0; col < 4; ++col) {
        m(r, col) = require_number(ext[r * 4 + col], path,
                                   base + ".extrinsics[" +
                                       std::to_string(r * 4 + col) + "]");
      }
    }
    try {
      cam.extrinsics = RigidTransform::from_matrix(m);
    } catch (const Error& e) {
      throw ParseError(path, base + ".extrinsics", e.what());
    }
    cameras.push_back(cam);
  }
  try {
    return Rig(std::move(cameras));
  } catch (const Error& e) {
    throw ParseError(path, "cameras", e.what());
  }
}

void save_rig(const Rig& rig, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["cameras"] = nlohmann::ordered_json::array();
  for (const Camera& cam : rig.cameras()) {
    nlohmann::ordered_json c;
    c["id"] = cam.id;
    c["fx"] = cam.intrinsics.fx;
    c["fy"] = cam.intrinsics.fy;
    c["cx"] = cam.intrinsics.cx;
    c["cy"] = cam.intrinsics.cy;
    c["height"] = cam.height;
    c["width"] = cam.width;
    Mat4 m = cam.extrinsics.matrix();
    std::vector<double> flat;
    flat.reserve(16);
    for (int r = 0; r < 4; ++r) {
      for (int col = 0; col < 4; ++col) flat.push_back(m(r, col));
    }
    c["extrinsics"] = flat;
    doc["cameras"].push_back(c);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError(path, "", "cannot open file for writing");
  }
  out << doc.dump(2) << "\n";
}

}  // namespace survgeo
