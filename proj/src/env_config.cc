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

#include "taxelsim/env_config.h"

#include <cmath>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

namespace {

constexpr int kSchemaVersion = 1;

std::vector<double> PerJoint(const ju::Json& j, const char* key, double fallback, int n,
                             const std::string& path) {
  if (!j.contains(key)) return std::vector<double>(static_cast<std::size_t>(n), fallback);
  const std::string p = ju::Child(path, key);
  if (j[key].is_number()) {
    return std::vector<double>(static_cast<std::size_t>(n), ju::Number(j[key], p));
  }
  auto v = ju::ReadNumbers(j[key], p);
  if (static_cast<int>(v.size()) != n) ju::Fail(p, "expected a number or " + std::to_string(n) + " numbers");
  return v;
}

void SetOuterCenterFromLimits(EnvConfig& c) {
  const auto lower = c.hand.lower_limits();
  const auto upper = c.hand.upper_limits();
  for (int i = 0; i < 4; ++i) {
    const int joint = c.hand.outer_joints[i];
    c.grasp_reward.outer_center[i] = 0.5 * (lower[joint] + upper[joint]);
  }
}

}  // namespace

std::string TaskName(Task task) { return task == Task::kGrasp ? "grasp" : "rotate"; }

Task ParseTask(const std::string& name) {
  if (name == "grasp") return Task::kGrasp;
  if (name == "rotate") return Task::kRotate;
  throw ConfigError("task: unknown task '" + name + "' (expected grasp or rotate)");
}

void EnvConfig::Validate() const {
  hand.ValidateCanonical();
  material.Validate();
  randomization.Validate();
  grasp_reward.Validate();
  rotate_reward.Validate();
  const int n = hand.num_joints();
  if (!(physics.control_dt > 0.0)) throw ConfigError("physics.control_dt must be positive");
  if (physics.substeps < 1) throw ConfigError("physics.substeps must be >= 1");
  if (!physics.gravity.allFinite()) throw ConfigError("physics.gravity must be finite");
  if (static_cast<int>(physics.joint_inertia.size()) != n || static_cast<int>(physics.joint_damping.size()) != n) {
    throw ConfigError("physics: joint_inertia and joint_damping need one entry per joint");
  }
  for (int j = 0; j < n; ++j) {
    if (!(physics.joint_inertia[j] > 0.0)) throw ConfigError("physics.joint_inertia must be positive");
    if (!(physics.joint_damping[j] >= 0.0)) throw ConfigError("physics.joint_damping must be non-negative");
  }
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (!(object.density > 0.0)) throw ConfigError("object.density must be positive");
  if (!(object.friction >= 0.0)) throw ConfigError("object.friction must be non-negative");
  if (!(object.restitution >= 0.0 && object.restitution <= 1.0)) {
    throw ConfigError("object.restitution must lie in [0, 1]");
  }
  if (!(object.damping >= 0.0)) throw ConfigError("object.damping must be non-negative");
  if (grasp.hold_fingers < 1 || grasp.hold_fingers > kNumFingers) {
    throw ConfigError("grasp.hold_fingers must lie in [1, 5]");
  }
  if (grasp.hold_steps < 1) throw ConfigError("grasp.hold_steps must be >= 1");
  if (!(grasp.hold_speed > 0.0)) throw ConfigError("grasp.hold_speed must be positive");
  if (!(grasp.position_noise >= 0.0)) throw ConfigError("grasp.position_noise must be non-negative");
  if (std::abs(rotate.axis.norm() - 1.0) > 1e-9) throw ConfigError("rotate.axis must be a unit vector");
  if (!(rotate.max_drift > 0.0)) throw ConfigError("rotate.max_drift must be positive");
  for (int j = 0; j < n; ++j) {
    if (!calibration.For(j).sim) {
      throw ConfigError("calibration: joint " + std::to_string(j) + " has no sim-domain fit");
    }
  }
}

EnvConfig DefaultEnvConfig(Task task) {
  EnvConfig c;
  c.task = task;
  c.hand = CanonicalHandModel();
  const int n = c.hand.num_joints();
  c.physics.joint_inertia.assign(static_cast<std::size_t>(n), 1e-3);
  c.physics.joint_damping.assign(static_cast<std::size_t>(n), 0.02);
  c.shape = task == Task::kGrasp ? ObjectShape::MakeSphere(0.03)
                                 : ObjectShape::MakeBox(Vec3(0.025, 0.025, 0.025));
  c.object.volume = c.shape.Volume();
  c.calibration = CalibrationMap::SharedTorqueScale(0.8);
  SetOuterCenterFromLimits(c);
  return c;
}

EnvConfig ParseEnvConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) ju::Fail("", "config must be a JSON object");
  const int version = ju::IntegerOr(doc, "schema_version", kSchemaVersion, "");
  if (version != kSchemaVersion) {
    ju::Fail("schema_version", "unsupported version " + std::to_string(version));
  }
  const Task task = [&] {
    try {
      return ParseTask(ju::StringOr(doc, "task", "grasp", ""));
    } catch (const ConfigError& e) {
      ju::Fail("task", e.what());
    }
  }();
  EnvConfig c = DefaultEnvConfig(task);

  if (doc.contains("hand")) {
    if (!doc["hand"].is_string()) ju::Fail("hand", "expected path to a hand model file");
    std::filesystem::path p = doc["hand"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    c.hand = LoadHandModel(p, /*canonical=*/true);
    SetOuterCenterFromLimits(c);
  }
  if (doc.contains("object")) {
    const ju::Json& o = doc["object"];
    if (!o.is_object()) ju::Fail("object", "expected object");
    if (o.contains("shape")) c.shape = ParseObjectShape(o["shape"], "object.shape", base_dir);
    c.object.density = ju::NumberOr(o, "density", c.object.density, "object");
    c.object.friction = ju::NumberOr(o, "friction", c.object.friction, "object");
    c.object.restitution = ju::NumberOr(o, "restitution", c.object.restitution, "object");
    c.object.damping = ju::NumberOr(o, "damping", c.object.damping, "object");
  }
  c.object.volume = c.shape.Volume();
  if (doc.contains("material")) c.material = ParseContactMaterial(doc["material"], "material");
  if (doc.contains("randomization")) {
    c.randomization = ParseRandomizationSpec(doc["randomization"], "randomization");
  }
  if (doc.contains("reward")) {
    if (task == Task::kGrasp) {
      c.grasp_reward = ParseGraspRewardConfig(doc["reward"], "reward");
      if (!doc["reward"].contains("outer_center")) SetOuterCenterFromLimits(c);
    } else {
      c.rotate_reward = ParseRotationRewardConfig(doc["reward"], "reward");
    }
  }
  c.calibration = CalibrationMap::SharedTorqueScale(
      ju::NumberOr(doc, "calibration_tau_max", 0.8, ""));
  if (doc.contains("calibration")) {
    if (!doc["calibration"].is_string()) ju::Fail("calibration", "expected path to a calibration file");
    std::filesystem::path p = doc["calibration"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    try {
      c.calibration = CalibrationMap::Load(p);
    } catch (const ConfigError& e) {
      ju::Fail("calibration", e.what());
    }
  }
  if (doc.contains("physics")) {
    const ju::Json& p = doc["physics"];
    if (!p.is_object()) ju::Fail("physics", "expected object");
    c.physics.control_dt = ju::NumberOr(p, "control_dt", c.physics.control_dt, "physics");
    c.physics.substeps = ju::IntegerOr(p, "substeps", c.physics.substeps, "physics");
    if (p.contains("gravity")) c.physics.gravity = ju::ReadVec3(p["gravity"], "physics.gravity");
    const int n = c.hand.num_joints();
    c.physics.joint_inertia = PerJoint(p, "joint_inertia", 1e-3, n, "physics");
    c.physics.joint_damping = PerJoint(p, "joint_damping", 0.02, n, "physics");
    c.physics.contacts = ju::BoolOr(p, "contacts", c.physics.contacts, "physics");
  }
  c.max_steps = ju::IntegerOr(doc, "max_steps", c.max_steps, "");
  if (doc.contains("grasp")) {
    const ju::Json& g = doc["grasp"];
    if (!g.is_object()) ju::Fail("grasp", "expected object");
    if (g.contains("spawn_xy")) {
      const auto xy = ju::ReadNumbers(g["spawn_xy"], "grasp.spawn_xy");
      if (xy.size() != 2) ju::Fail("grasp.spawn_xy", "expected [x, y]");
      c.grasp.spawn_x = xy[0];
      c.grasp.spawn_y = xy[1];
    }
    c.grasp.floor_z = ju::NumberOr(g, "floor_z", c.grasp.floor_z, "grasp");
    c.grasp.hold_speed = ju::NumberOr(g, "hold_speed", c.grasp.hold_speed, "grasp");
    c.grasp.hold_fingers = ju::IntegerOr(g, "hold_fingers", c.grasp.hold_fingers, "grasp");
    c.grasp.hold_steps = ju::IntegerOr(g, "hold_steps", c.grasp.hold_steps, "grasp");
    c.grasp.position_noise = ju::NumberOr(g, "position_noise", c.grasp.position_noise, "grasp");
  }
  if (doc.contains("rotate")) {
    const ju::Json& r = doc["rotate"];
    if (!r.is_object()) ju::Fail("rotate", "expected object");
    if (r.contains("object_pose")) c.rotate.object_pose = ju::ReadTransform(r["object_pose"], "rotate.object_pose");
    if (r.contains("axis")) c.rotate.axis = ju::ReadVec3(r["axis"], "rotate.axis");
    c.rotate.max_drift = ju::NumberOr(r, "max_drift", c.rotate.max_drift, "rotate");
  }
  c.Validate();
  return c;
}

EnvConfig LoadEnvConfig(const std::filesystem::path& file) {
  return ParseEnvConfig(ju::ParseFile(file), file.parent_path());
}

nlohmann::json EnvConfigToJson(const EnvConfig& c) {
  ju::Json physics = {{"control_dt", c.physics.control_dt},
                      {"substeps", c.physics.substeps},
                      {"gravity", ju::WriteVec3(c.physics.gravity)},
                      {"joint_inertia", c.physics.joint_inertia},
                      {"joint_damping", c.physics.joint_damping},
                      {"contacts", c.physics.contacts}};
  ju::Json object = {{"shape", ObjectShapeToJson(c.shape)},
                     {"density", c.object.density},
                     {"friction", c.object.friction},
                     {"restitution", c.object.restitution},
                     {"damping", c.object.damping}};
  ju::Json j = {{"schema_version", kSchemaVersion},
                {"task", TaskName(c.task)},
                {"hand", c.hand.name},
                {"object", object},
                {"material", ContactMaterialToJson(c.material)},
                {"randomization", RandomizationSpecToJson(c.randomization)},
                {"reward", c.task == Task::kGrasp ? GraspRewardConfigToJson(c.grasp_reward)
                                                  : RotationRewardConfigToJson(c.rotate_reward)},
                {"calibration", c.calibration.ToJson()},
                {"physics", physics},
                {"max_steps", c.max_steps}};
  if (c.task == Task::kGrasp) {
    j["grasp"] = {{"spawn_xy", {c.grasp.spawn_x, c.grasp.spawn_y}},
                  {"floor_z", c.grasp.floor_z},
                  {"hold_speed", c.grasp.hold_speed},
                  {"hold_fingers", c.grasp.hold_fingers},
                  {"hold_steps", c.grasp.hold_steps},
                  {"position_noise", c.grasp.position_noise}};
  } else {
    j["rotate"] = {{"object_pose", ju::WriteTransform(c.rotate.object_pose)},
                   {"axis", ju::WriteVec3(c.rotate.axis)},
                   {"max_drift", c.rotate.max_drift}};
  }
  return j;
}

}  // namespace taxelsim
