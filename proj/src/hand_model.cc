// Copyright 2026 The TaxelSim Authors
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

#include "taxelsim/hand_model.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"
#include "taxelsim/parallel.h"

// Generated from configs/hand_canonical.json; defines kCanonicalHandJson.
#include "canonical_hand.inc"

namespace taxelsim {

namespace ju = json_util;

namespace {

constexpr double kUnitTolerance = 1e-9;

std::string FingerPath(int f) { return "fingers[" + std::to_string(f) + "]"; }

void Check(bool ok, const std::string& path, const std::string& what) {
  if (!ok) ju::Fail(path, what);
}

void CheckRole(const std::vector<int>& joints, int n, const std::string& path) {
  for (std::size_t i = 0; i < joints.size(); ++i) {
    Check(joints[i] >= 0 && joints[i] < n, ju::Index(path, i), "joint index out of range");
  }
}

}  // namespace

int HandModel::num_joints() const {
  int n = 0;
  for (const auto& f : fingers) n += static_cast<int>(f.joints.size());
  return n;
}

int HandModel::num_taxels() const {
  int n = 0;
  for (const auto& f : fingers) n += static_cast<int>(f.taxel_positions.size());
  return n;
}

int HandModel::joint_offset(int finger) const {
  int n = 0;
  for (int f = 0; f < finger; ++f) n += static_cast<int>(fingers[f].joints.size());
  return n;
}

int HandModel::taxel_offset(int finger) const {
  int n = 0;
  for (int f = 0; f < finger; ++f) n += static_cast<int>(fingers[f].taxel_positions.size());
  return n;
}

std::vector<double> HandModel::lower_limits() const {
  std::vector<double> out;
  for (const auto& f : fingers) {
    for (const auto& j : f.joints) out.push_back(j.lower);
  }
  return out;
}

std::vector<double> HandModel::upper_limits() const {
  std::vector<double> out;
  for (const auto& f : fingers) {
    for (const auto& j : f.joints) out.push_back(j.upper);
  }
  return out;
}

void HandModel::Validate() const {
  Check(IsRotation(base.rotation, kRotationInputTolerance), "base.rotation", "not a rotation");
  for (int f = 0; f < static_cast<int>(fingers.size()); ++f) {
    const FingerChain& chain = fingers[f];
    const std::string fp = FingerPath(f);
    for (std::size_t j = 0; j < chain.joints.size(); ++j) {
      const Joint& joint = chain.joints[j];
      const std::string jp = ju::Index(ju::Child(fp, "joints"), j);
      Check(std::abs(joint.axis.norm() - 1.0) <= kUnitTolerance, ju::Child(jp, "axis"),
            "joint axis must be a unit vector");
      Check(joint.lower < joint.upper, ju::Child(jp, "limits"), "limits must satisfy lower < upper");
      Check(IsRotation(joint.origin.rotation, kRotationInputTolerance), ju::Child(jp, "origin"),
            "origin rotation is not a rotation");
    }
    Check(chain.taxel_positions.size() == chain.taxel_normals.size(), ju::Child(fp, "taxels"),
          "positions and normals differ in count");
    for (std::size_t t = 0; t < chain.taxel_normals.size(); ++t) {
      Check(std::abs(chain.taxel_normals[t].norm() - 1.0) <= 1e-6,
            ju::Index(ju::Child(ju::Child(fp, "taxels"), "normals"), t),
            "taxel normal must be a unit vector");
    }
  }
  const int n = num_joints();
  CheckRole(finger_root_joints, n, "roles.finger_root_joints");
  CheckRole(consistency_joints, n, "roles.consistency_joints");
  CheckRole(outer_joints, n, "roles.outer_joints");
}

void HandModel::ValidateCanonical() const {
  Validate();
  Check(fingers.size() == kNumFingers, "fingers", "expected exactly 5 fingers");
  Check(num_joints() == kNumJoints, "fingers", "expected 12 actuated joints in total");
  for (int f = 0; f < kNumFingers; ++f) {
    Check(fingers[f].taxel_positions.size() == kTaxelsPerFinger,
          ju::Child(FingerPath(f), "taxels"), "expected 120 taxels per fingertip");
  }
  Check(finger_root_joints.size() == kNumFingers, "roles.finger_root_joints", "expected 5 entries");
  Check(consistency_joints.size() == 4, "roles.consistency_joints", "expected 4 entries");
  Check(outer_joints.size() == 4, "roles.outer_joints", "expected 4 entries");
}

namespace {

void LayoutBasis(const Vec3& axis, Vec3* e1, Vec3* e2) {
  const Vec3 a = axis.normalized();
  const Vec3 helper = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  *e1 = (helper - helper.dot(a) * a).normalized();
  *e2 = a.cross(*e1);
}

template <typename Fn>
std::vector<Vec3> HemisphereNodes(const HemisphereLayout& layout, Fn&& node) {
  Vec3 e1, e2;
  LayoutBasis(layout.axis, &e1, &e2);
  const Vec3 a = layout.axis.normalized();
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(layout.rings * layout.sectors));
  for (int k = 0; k < layout.rings; ++k) {
    const double polar = (k + 0.5) / layout.rings * (std::numbers::pi / 2.0);
    for (int m = 0; m < layout.sectors; ++m) {
      const double azimuth = 2.0 * std::numbers::pi * m / layout.sectors;
      const Vec3 radial = std::sin(polar) * std::cos(azimuth) * e1 +
                          std::sin(polar) * std::sin(azimuth) * e2 + std::cos(polar) * a;
      out.push_back(node(radial.normalized()));
    }
  }
  return out;
}

}  // namespace

std::vector<Vec3> HemisphereTaxelPositions(const HemisphereLayout& layout) {
  return HemisphereNodes(layout, [&](const Vec3& r) -> Vec3 {
    return layout.center + layout.radius * r;
  });
}

std::vector<Vec3> HemisphereTaxelNormals(const HemisphereLayout& layout) {
  return HemisphereNodes(layout, [](const Vec3& r) -> Vec3 { return r; });
}

TaxelFrameBatch ForwardKinematics(const HandModel& model, std::span<const double> q) {
  const int n = model.num_joints();
  if (static_cast<int>(q.size()) != n) {
    throw ModelMismatchError("ForwardKinematics: expected " + std::to_string(n) +
                             " joint positions, got " + std::to_string(q.size()));
  }
  TaxelFrameBatch out;
  const std::size_t taxels = static_cast<std::size_t>(model.num_taxels());
  out.positions.resize(taxels);
  out.normals.resize(taxels);
  out.fingertip_poses.reserve(model.fingers.size());
  out.offsets.reserve(model.fingers.size() + 1);
  out.offsets.push_back(0);

  std::size_t qi = 0;
  std::size_t ti = 0;
  for (const FingerChain& chain : model.fingers) {
    Transform pose = model.base;
    for (const Joint& joint : chain.joints) {
      pose = pose * joint.origin;
      pose.rotation = pose.rotation * AxisAngle(joint.axis, q[qi++]);
    }
    pose = pose * chain.tip;
    out.fingertip_poses.push_back(pose);
    for (std::size_t t = 0; t < chain.taxel_positions.size(); ++t, ++ti) {
      out.positions[ti] = pose.Apply(chain.taxel_positions[t]);
      out.normals[ti] = pose.rotation * chain.taxel_normals[t];
    }
    out.offsets.push_back(static_cast<int>(ti));
  }
  return out;
}

TaxelFrameBatch ForwardKinematics(const HandModel& model, const JointState& state) {
  if (state.qd.size() != state.q.size()) {
    throw ModelMismatchError("ForwardKinematics: position and velocity sizes differ");
  }
  return ForwardKinematics(model, std::span<const double>(state.q));
}

std::vector<TaxelFrameBatch> BatchForwardKinematics(const HandModel& model,
                                                    std::span<const JointState> states,
                                                    int max_threads) {
  // Validate up front so a mismatch surfaces before any work is done.
  const std::size_t n = static_cast<std::size_t>(model.num_joints());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].q.size() != n || states[i].qd.size() != n) {
      throw ModelMismatchError("BatchForwardKinematics: state " + std::to_string(i) +
                               " does not match the model's " + std::to_string(n) + " joints");
    }
  }
  std::vector<TaxelFrameBatch> out(states.size());
  ParallelFor(states.size(), max_threads,
              [&](std::size_t i) { out[i] = ForwardKinematics(model, states[i]); });
  return out;
}

namespace {

HemisphereLayout ParseLayout(const ju::Json& j, const std::string& path) {
  const std::string type = ju::StringOr(j, "type", "hemisphere_grid", path);
  if (type != "hemisphere_grid") ju::Fail(ju::Child(path, "type"), "unknown layout type '" + type + "'");
  HemisphereLayout layout;
  layout.radius = ju::NumberOr(j, "radius", layout.radius, path);
  layout.rings = ju::IntegerOr(j, "rings", layout.rings, path);
  layout.sectors = ju::IntegerOr(j, "sectors", layout.sectors, path);
  if (j.contains("center")) layout.center = ju::ReadVec3(j["center"], ju::Child(path, "center"));
  if (j.contains("axis")) layout.axis = ju::ReadVec3(j["axis"], ju::Child(path, "axis"));
  Check(layout.radius > 0.0, ju::Child(path, "radius"), "must be positive");
  Check(layout.rings > 0 && layout.sectors > 0, path, "rings and sectors must be positive");
  Check(layout.axis.norm() > 1e-12, ju::Child(path, "axis"), "zero axis");
  return layout;
}

std::vector<int> ReadIndices(const ju::Json& j, const std::string& path) {
  if (!j.is_array()) ju::Fail(path, "expected array of joint indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) ju::Fail(ju::Index(path, i), "expected integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

std::vector<Vec3> ReadVec3List(const ju::Json& j, const std::string& path) {
  if (!j.is_array()) ju::Fail(path, "expected array of 3-vectors");
  std::vector<Vec3> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ju::ReadVec3(j[i], ju::Index(path, i)));
  return out;
}

}  // namespace

HandModel ParseHandModel(const nlohmann::json& doc, bool canonical) {
  if (!doc.is_object()) ju::Fail("", "hand model must be a JSON object");
  const int version = ju::IntegerOr(doc, "schema_version", 1, "");
  if (version != 1) ju::Fail("schema_version", "unsupported version " + std::to_string(version));

  HandModel model;
  model.name = ju::StringOr(doc, "name", "hand", "");
  if (doc.contains("base")) model.base = ju::ReadTransform(doc["base"], "base");

  std::optional<HemisphereLayout> default_layout;
  if (doc.contains("taxel_layout")) default_layout = ParseLayout(doc["taxel_layout"], "taxel_layout");

  const ju::Json& fingers = ju::Require(doc, "fingers", "");
  if (!fingers.is_array()) ju::Fail("fingers", "expected array");
  for (std::size_t f = 0; f < fingers.size(); ++f) {
    const std::string fp = ju::Index("fingers", f);
    const ju::Json& fj = fingers[f];
    FingerChain chain;
    chain.name = ju::StringOr(fj, "name", "finger" + std::to_string(f), fp);
    const ju::Json& joints = ju::Require(fj, "joints", fp);
    if (!joints.is_array()) ju::Fail(ju::Child(fp, "joints"), "expected array");
    for (std::size_t k = 0; k < joints.size(); ++k) {
      const std::string jp = ju::Index(ju::Child(fp, "joints"), k);
      const ju::Json& jj = joints[k];
      Joint joint;
      joint.name = ju::StringOr(jj, "name", chain.name + "_j" + std::to_string(k), jp);
      joint.axis = ju::ReadVec3(ju::Require(jj, "axis", jp), ju::Child(jp, "axis"));
      const auto limits = ju::ReadNumbers(ju::Require(jj, "limits", jp), ju::Child(jp, "limits"));
      if (limits.size() != 2) ju::Fail(ju::Child(jp, "limits"), "expected [lower, upper]");
      joint.lower = limits[0];
      joint.upper = limits[1];
      if (jj.contains("origin")) joint.origin = ju::ReadTransform(jj["origin"], ju::Child(jp, "origin"));
      chain.joints.push_back(joint);
    }
    if (fj.contains("tip")) chain.tip = ju::ReadTransform(fj["tip"], ju::Child(fp, "tip"));

    if (fj.contains("taxels")) {
      const std::string tp = ju::Child(fp, "taxels");
      chain.taxel_positions = ReadVec3List(ju::Require(fj["taxels"], "positions", tp), ju::Child(tp, "positions"));
      chain.taxel_normals = ReadVec3List(ju::Require(fj["taxels"], "normals", tp), ju::Child(tp, "normals"));
    } else {
      std::optional<HemisphereLayout> layout = default_layout;
      if (fj.contains("taxel_layout")) layout = ParseLayout(fj["taxel_layout"], ju::Child(fp, "taxel_layout"));
      if (!layout) ju::Fail(fp, "no taxels and no taxel_layout (finger or top level)");
      chain.taxel_positions = HemisphereTaxelPositions(*layout);
      chain.taxel_normals = HemisphereTaxelNormals(*layout);
    }
    model.fingers.push_back(std::move(chain));
  }

  if (doc.contains("roles")) {
    const ju::Json& roles = doc["roles"];
    if (roles.contains("finger_root_joints"))
      model.finger_root_joints = ReadIndices(roles["finger_root_joints"], "roles.finger_root_joints");
    if (roles.contains("consistency_joints"))
      model.consistency_joints = ReadIndices(roles["consistency_joints"], "roles.consistency_joints");
    if (roles.contains("outer_joints"))
      model.outer_joints = ReadIndices(roles["outer_joints"], "roles.outer_joints");
  }

  if (canonical) {
    model.ValidateCanonical();
  } else {
    model.Validate();
  }
  return model;
}

HandModel LoadHandModel(const std::filesystem::path& file, bool canonical) {
  return ParseHandModel(ju::ParseFile(file), canonical);
}

nlohmann::json HandModelToJson(const HandModel& model) {
  ju::Json doc;
  doc["schema_version"] = 1;
  doc["name"] = model.name;
  doc["base"] = ju::WriteTransform(model.base);
  ju::Json fingers = ju::Json::array();
  for (const FingerChain& chain : model.fingers) {
    ju::Json fj;
    fj["name"] = chain.name;
    ju::Json joints = ju::Json::array();
    for (const Joint& joint : chain.joints) {
      joints.push_back({{"name", joint.name},
                        {"axis", ju::WriteVec3(joint.axis)},
                        {"limits", {joint.lower, joint.upper}},
                        {"origin", ju::WriteTransform(joint.origin)}});
    }
    fj["joints"] = joints;
    fj["tip"] = ju::WriteTransform(chain.tip);
    ju::Json positions = ju::Json::array();
    ju::Json normals = ju::Json::array();
    for (const Vec3& p : chain.taxel_positions) positions.push_back(ju::WriteVec3(p));
    for (const Vec3& n : chain.taxel_normals) normals.push_back(ju::WriteVec3(n));
    fj["taxels"] = {{"positions", positions}, {"normals", normals}};
    fingers.push_back(fj);
  }
  doc["fingers"] = fingers;
  doc["roles"] = {{"finger_root_joints", model.finger_root_joints},
                  {"consistency_joints", model.consistency_joints},
                  {"outer_joints", model.outer_joints}};
  return doc;
}

HandModel CanonicalHandModel() {
  static const HandModel model = ParseHandModel(ju::Json::parse(kCanonicalHandJson), true);
  return model;
}

}  // namespace taxelsim
