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

// Reward and penalty terms for the grasping and rotation tasks.
//
// Penalty weights carry their sign: a negative w_diff makes the variance
// term a penalty. Masks use inclusive bounds, bonus thresholds are strict.

#ifndef TAXELSIM_REWARDS_H_
#define TAXELSIM_REWARDS_H_

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace taxelsim {

struct GraspRewardConfig {
  double w_torque = 1.0;
  double w_force = 1.0;
  double w_diff = -1.0;
  double w_outter = -0.5;
  double w_action = -0.01;
  double w_vel = -0.001;
  double w_terminal = -50.0;
  double sigma = 0.10;
  double tau_max = 1.0;    // tau_target = tau_max * F_cmd
  double f_max = 5.0;      // F_target = F_max * F_cmd
  std::pair<double, double> torque_range{0.01, 1.1};
  std::pair<double, double> force_range{0.01, 200.0};
  std::array<double, 4> outer_center{0.0, 0.0, 0.0, 0.0};  // rad

  void Validate() const;
};

struct RotationRewardConfig {
  double close_weight = 1.0;
  double action_weight = -0.0002;
  double goal_bonus = 250.0;
  double rot_threshold = 0.3;
  double pos_threshold = 0.05;
  double sigmoid_gain = 400.0;
  double sigmoid_center = 0.05;
  double eps_rot = 0.1;

  void Validate() const;
};

// Per-finger contribution before weighting: binary on the mask for the
// thumb (finger 0), Gaussian around `target` gated by the mask otherwise.
double FingerTerm(int finger, double value, double target, double sigma,
                  std::pair<double, double> range);

double TorqueReward(std::span<const double> tau, std::span<const bool> contact, double f_cmd,
                    const GraspRewardConfig& cfg);
double ForceReward(std::span<const double> force, std::span<const bool> contact, double f_cmd,
                   const GraspRewardConfig& cfg);
// w_diff times the population variance of the four inner root joints.
double ConsistencyPenalty(std::span<const double> q_inner, const GraspRewardConfig& cfg);
// w_outter times || q_outer - c_outter ||_2.
double OuterPenalty(std::span<const double> q_outer, const GraspRewardConfig& cfg);
double ActionRatePenalty(std::span<const double> a_t, std::span<const double> a_prev, double weight);
double VelocityPenalty(std::span<const double> qd, double weight);
double RotationReward(double d_rot, double d_goal, const RotationRewardConfig& cfg);
double GoalBonus(double d_rot, double d_pos, const RotationRewardConfig& cfg);

// Named reward terms in a fixed order; total is their sum.
struct RewardBreakdown {
  std::vector<std::pair<std::string, double>> terms;
  double total = 0.0;

  void Add(const std::string& name, double value);
};

struct GraspRewardInput {
  std::array<double, 5> finger_torque{};  // root-joint torque, N m
  std::array<double, 5> finger_force{};   // tactile F_i
  std::array<bool, 5> contact{};
  double f_cmd = 0.0;
  std::array<double, 4> q_inner{};
  std::array<double, 4> q_outer{};
  std::span<const double> action;
  std::span<const double> last_action;
  std::span<const double> qd;
  bool failed = false;
};

// Terms: torque, force, diff, outter, action, vel, terminal.
RewardBreakdown GraspReward(const GraspRewardInput& in, const GraspRewardConfig& cfg);

// Terms: close, bonus, action.
RewardBreakdown RotateReward(double d_rot, double d_pos, std::span<const double> action,
                             std::span<const double> last_action, const RotationRewardConfig& cfg);

GraspRewardConfig ParseGraspRewardConfig(const nlohmann::json& j, const std::string& path);
RotationRewardConfig ParseRotationRewardConfig(const nlohmann::json& j, const std::string& path);
nlohmann::json GraspRewardConfigToJson(const GraspRewardConfig& cfg);
nlohmann::json RotationRewardConfigToJson(const RotationRewardConfig& cfg);

}  // namespace taxelsim

#endif  // TAXELSIM_REWARDS_H_
