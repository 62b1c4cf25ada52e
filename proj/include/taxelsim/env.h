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

// Single-environment episode execution.
//
// Each control step runs `substeps` physics substeps of length h:
//   1. actuator torque per joint from the target position,
//   2. joint plant  qdd = (tau - b qd) / J,  semi-implicit Euler, limits clamp,
//   3. fingertip FK and taxel sensing,
//   4. object: gravity, then one sequential impulse per active taxel along
//      -n_o (loading: min(f h, m_eff (1 + e) s), unloading: e f h) with a
//      Coulomb-capped tangential impulse, then damping, then integration.
// The loading impulse never exceeds what cancels the approach speed, so at
// e = 0 a passive contact cannot add kinetic energy. Angular velocity is
// held in the body frame between impulses, which keeps rotational kinetic
// energy exact for a free body.

#ifndef TAXELSIM_ENV_H_
#define TAXELSIM_ENV_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "taxelsim/env_config.h"
#include "taxelsim/hand_model.h"
#include "taxelsim/observation.h"
#include "taxelsim/randomization.h"
#include "taxelsim/rewards.h"
#include "taxelsim/tactile.h"

namespace taxelsim {

struct EnvState {
  JointState joints;
  Transform object_pose;
  Vec3 object_velocity = Vec3::Zero();
  Vec3 object_angular_velocity = Vec3::Zero();  // world frame
  std::vector<FingertipTactile> tactile;
  std::vector<double> applied_torque;
  std::vector<double> last_action;
  std::vector<Transform> fingertip_poses;
  std::vector<Vec3> fingertip_linear_velocity;
  std::vector<Vec3> fingertip_angular_velocity;
  Vec3 observed_object_position = Vec3::Zero();
  double f_cmd = 0.0;
  Mat3 goal = Mat3::Identity();
  Mat3 initial_goal = Mat3::Identity();
  Vec3 reference_position = Vec3::Zero();
  int step = 0;
  int success_count = 0;
  int hold_count = 0;
  bool done = false;
};

struct StepResult {
  Observation observation;
  RewardBreakdown reward;
  bool terminated = false;  // task failure (floor, drift)
  bool truncated = false;   // step budget reached
  bool success_event = false;
  std::string reason;       // "", "floor", "drift", "budget"
};

// Net nominal contact force on the object: sum over active taxels of
// -f_ij n_o.
Vec3 NetContactForce(std::span<const FingertipTactile> tactile);

// Goal after one success: +90 degrees about the fixed world axis.
Mat3 ShiftGoal(const Mat3& goal, const Vec3& axis);

class Env {
 public:
  // `seed` and `index` select the environment's private random stream.
  Env(std::shared_ptr<const EnvConfig> config, std::uint64_t seed, std::uint64_t index);

  Observation Reset();
  // Throws ContractViolationError for a wrong-sized or non-finite action, or
  // after the episode is done; PoisonedStateError on NaN/Inf state.
  StepResult Step(std::span<const double> action);

  Observation Observe() const;

  const EnvConfig& config() const { return *config_; }
  const EnvState& state() const { return state_; }
  // For tests that need to place the object or joints directly.
  EnvState& mutable_state() { return state_; }
  const EpisodeDraw& draw() const { return draw_; }
  double object_mass() const { return mass_; }
  double object_kinetic_energy() const;

 private:
  void Substep(double h, std::span<const double> q_ref, int substep);
  void ResolveContacts(double h, std::span<const FingertipTactile> tactile,
                       std::span<const Vec3> taxel_velocity, const TaxelFrameBatch& frames);
  void ApplyImpulse(const Vec3& r, const Vec3& impulse);
  Mat3 WorldInverseInertia() const;
  void Sense();
  void CheckFinite(const char* where, int substep) const;

  std::shared_ptr<const EnvConfig> config_;
  RngStream stream_;
  EpisodeDraw draw_;
  EnvState state_;
  ObjectShape shape_;
  double mass_ = 1.0;
  Mat3 body_inertia_ = Mat3::Identity();
  Mat3 body_inertia_inv_ = Mat3::Identity();
  std::vector<Vec3> prev_taxels_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace taxelsim

#endif  // TAXELSIM_ENV_H_
