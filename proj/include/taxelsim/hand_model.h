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

// Hand kinematics: serial finger chains with explicit parent-frame joint
// transforms, and the taxel layout carried by each fingertip.
//
// A fingertip pose is
//   base * origin_0 * Rot(axis_0, q_0) * ... * origin_n * Rot(axis_n, q_n) * tip
// and every taxel is rigidly attached to its fingertip frame.

#ifndef TAXELSIM_HAND_MODEL_H_
#define TAXELSIM_HAND_MODEL_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/rotation.h"

namespace taxelsim {

inline constexpr int kNumFingers = 5;
inline constexpr int kNumJoints = 12;
inline constexpr int kTaxelsPerFinger = 120;
inline constexpr int kNumTaxels = kNumFingers * kTaxelsPerFinger;

struct Joint {
  std::string name;
  Vec3 axis = Vec3::UnitZ();
  Transform origin;  // joint frame in the parent frame at q = 0
  double lower = 0.0;
  double upper = 0.0;
};

// Layout generator for a fingertip pad: `rings` x `sectors` nodes on a
// hemispherical cap of `radius` around `center`, capped toward `axis`.
struct HemisphereLayout {
  double radius = 0.01;
  int rings = 10;
  int sectors = 12;
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
};

struct FingerChain {
  std::string name;
  std::vector<Joint> joints;
  Transform tip;  // fingertip frame relative to the last joint frame
  std::vector<Vec3> taxel_positions;  // fingertip frame
  std::vector<Vec3> taxel_normals;    // fingertip frame, outward unit
};

struct HandModel {
  std::string name;
  Transform base;
  std::vector<FingerChain> fingers;
  // Per-finger joint (global index) whose torque feeds the grasp rewards.
  std::vector<int> finger_root_joints;
  // First flexion joint of index/middle/ring/little.
  std::vector<int> consistency_joints;
  // Distal joints of index/middle/ring/little.
  std::vector<int> outer_joints;

  int num_joints() const;
  int num_taxels() const;
  // Global index of finger f's first joint.
  int joint_offset(int finger) const;
  int taxel_offset(int finger) const;
  std::vector<double> lower_limits() const;
  std::vector<double> upper_limits() const;

  // Structural checks for any model: unit axes, lower < upper, matching
  // taxel/normal counts, unit normals, role indices in range.
  void Validate() const;
  // Additionally: 5 fingers, 12 joints, 120 taxels per fingertip, and
  // role lists of length 5/4/4.
  void ValidateCanonical() const;
};

std::vector<Vec3> HemisphereTaxelPositions(const HemisphereLayout& layout);
std::vector<Vec3> HemisphereTaxelNormals(const HemisphereLayout& layout);

struct JointState {
  std::vector<double> q;   // rad
  std::vector<double> qd;  // rad/s

  static JointState Zero(int n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
};

// World-frame taxel positions and normals, finger-major (finger f's taxels
// occupy [taxel_offset(f), taxel_offset(f) + count)).
struct TaxelFrameBatch {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<Transform> fingertip_poses;
  std::vector<int> offsets;  // size fingers + 1

  std::span<const Vec3> FingerPositions(int finger) const {
    return std::span<const Vec3>(positions).subspan(
        offsets[finger], offsets[finger + 1] - offsets[finger]);
  }
  std::span<const Vec3> FingerNormals(int finger) const {
    return std::span<const Vec3>(normals).subspan(
        offsets[finger], offsets[finger + 1] - offsets[finger]);
  }
};

// Throws ModelMismatchError if q does not have num_joints() entries.
TaxelFrameBatch ForwardKinematics(const HandModel& model, std::span<const double> q);
TaxelFrameBatch ForwardKinematics(const HandModel& model, const JointState& state);

// Output i equals ForwardKinematics(model, states[i]) bit for bit. Work is
// split across up to `max_threads` threads (0 = default worker count).
std::vector<TaxelFrameBatch> BatchForwardKinematics(const HandModel& model,
                                                    std::span<const JointState> states,
                                                    int max_threads = 0);

// Builds the model described by a hand config document; schema errors name
// the offending JSON path.
HandModel ParseHandModel(const nlohmann::json& doc, bool canonical = true);
HandModel LoadHandModel(const std::filesystem::path& file, bool canonical = true);
nlohmann::json HandModelToJson(const HandModel& model);

// The 12-DoF, 600-taxel model shipped in configs/hand_canonical.json.
HandModel CanonicalHandModel();

}  // namespace taxelsim

#endif  // TAXELSIM_HAND_MODEL_H_
