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

// Episode configuration document. Every field has a default, so "{}" plus
// a task name is a complete config.
//
//   {
//     "schema_version": 1,
//     "task": "grasp" | "rotate",
//     "hand": "hand.json",                 // optional, canonical hand if absent
//     "object": {"shape": {...}, "density": 400, "friction": 1.0,
//                "restitution": 0.0, "damping": 0.0},
//     "material": {...},                    // ContactMaterial
//     "randomization": {...},               // RandomizationSpec
//     "reward": {...},                      // task-specific reward config
//     "calibration": "calibration.json",    // optional
//     "calibration_tau_max": 0.8,           // used without a calibration file
//     "physics": {"control_dt": 0.016666, "substeps": 4,
//                 "gravity": [0, 0, -9.81], "joint_inertia": 0.001,
//                 "joint_damping": 0.02, "contacts": true},
//     "max_steps": 200,
//     "grasp": {"spawn_xy": [0.12, 0.0], "floor_z": -0.05,
//               "hold_speed": 0.05, "hold_fingers": 2, "hold_steps": 30,
//               "position_noise": 0.0},
//     "rotate": {"object_pose": {...}, "axis": [0, 0, 1], "max_drift": 0.1}
//   }

#ifndef TAXELSIM_ENV_CONFIG_H_
#define TAXELSIM_ENV_CONFIG_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/calibration.h"
#include "taxelsim/hand_model.h"
#include "taxelsim/object_shape.h"
#include "taxelsim/randomization.h"
#include "taxelsim/rewards.h"
#include "taxelsim/rotation.h"
#include "taxelsim/tactile.h"

namespace taxelsim {

enum class Task { kGrasp, kRotate };

std::string TaskName(Task task);
// Throws ConfigError for unknown names.
Task ParseTask(const std::string& name);

struct PhysicsConfig {
  double control_dt = 1.0 / 60.0;
  int substeps = 4;
  Vec3 gravity{0.0, 0.0, -9.81};
  std::vector<double> joint_inertia;  // per joint, kg m^2
  std::vector<double> joint_damping;  // per joint, N m s / rad
  bool contacts = true;
};

struct GraspTaskConfig {
  double spawn_x = 0.12;
  double spawn_y = 0.0;
  double floor_z = -0.05;
  double hold_speed = 0.05;
  int hold_fingers = 2;
  int hold_steps = 30;
  double position_noise = 0.0;
};

struct RotateTaskConfig {
  Transform object_pose{Vec3(0.11, 0.0, 0.035), Mat3::Identity()};
  Vec3 axis = Vec3::UnitZ();
  double max_drift = 0.1;
};

struct EnvConfig {
  Task task = Task::kGrasp;
  HandModel hand;
  ObjectShape shape;
  ObjectNominal object;
  ContactMaterial material;
  RandomizationSpec randomization;
  GraspRewardConfig grasp_reward;
  RotationRewardConfig rotate_reward;
  CalibrationMap calibration;
  PhysicsConfig physics;
  int max_steps = 200;
  GraspTaskConfig grasp;
  RotateTaskConfig rotate;

  // Cross-field checks; throws ConfigError.
  void Validate() const;
};

// Defaults for `task` with the canonical hand and a 3 cm sphere (grasp)
// or a 5 cm cube (rotate).
EnvConfig DefaultEnvConfig(Task task);

// Relative file references resolve against `base_dir`.
EnvConfig ParseEnvConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir);
EnvConfig LoadEnvConfig(const std::filesystem::path& file);
// Fully resolved config, suitable for trace headers.
nlohmann::json EnvConfigToJson(const EnvConfig& config);

}  // namespace taxelsim

#endif  // TAXELSIM_ENV_CONFIG_H_
