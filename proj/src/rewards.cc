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

#include "taxelsim/rewards.h"

#include <cmath>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

namespace {

bool InRange(double v, std::pair<double, double> r) { return r.first <= v && v <= r.second; }

double SumFingers(std::span<const double> values, std::span<const bool> contact, double target,
                  double sigma, std::pair<double, double> range) {
  if (values.size() != 5 || contact.size() != 5) {
    throw ContractViolationError("finger reward expects 5 values and 5 contact flags");
  }
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    if (contact[i]) sum += FingerTerm(i, values[i], target, sigma, range);
  }
  return sum;
}

void CheckRange(std::pair<double, double> r, const char* name) {
  if (!(r.first <= r.second)) throw ConfigError(std::string("reward: ") + name + " range low exceeds high");
}

}  // namespace

void GraspRewardConfig::Validate() const {
  if (!(sigma > 0.0)) throw ConfigError("reward: sigma must be positive");
  if (!(tau_max > 0.0)) throw ConfigError("reward: tau_max must be positive");
  if (!(f_max > 0.0)) throw ConfigError("reward: f_max must be positive");
  CheckRange(torque_range, "torque");
  CheckRange(force_range, "force");
}

void RotationRewardConfig::Validate() const {
  if (!(rot_threshold > 0.0) || !(pos_threshold > 0.0)) {
    throw ConfigError("reward: thresholds must be positive");
  }
  if (!(eps_rot > 0.0)) throw ConfigError("reward: eps_rot must be positive");
}

double FingerTerm(int finger, double value, double target, double sigma,
                  std::pair<double, double> range) {
  if (!InRange(value, range)) return 0.0;
  if (finger == 0) return 1.0;
  const double d = value - target;
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double TorqueReward(std::span<const double> tau, std::span<const bool> contact, double f_cmd,
                    const GraspRewardConfig& cfg) {
  return cfg.w_torque * SumFingers(tau, contact, cfg.tau_max * f_cmd, cfg.sigma, cfg.torque_range);
}

double ForceReward(std::span<const double> force, std::span<const bool> contact, double f_cmd,
                   const GraspRewardConfig& cfg) {
  return cfg.w_force * SumFingers(force, contact, cfg.f_max * f_cmd, cfg.sigma, cfg.force_range);
}

double ConsistencyPenalty(std::span<const double> q_inner, const GraspRewardConfig& cfg) {
  if (q_inner.size() != 4) throw ContractViolationError("consistency penalty expects 4 joints");
  double mean = 0.0;
  for (double q : q_inner) mean += q;
  mean /= 4.0;
  double var = 0.0;
  for (double q : q_inner) var += (q - mean) * (q - mean);
  return cfg.w_diff * var / 4.0;
}

double OuterPenalty(std::span<const double> q_outer, const GraspRewardConfig& cfg) {
  if (q_outer.size() != 4) throw ContractViolationError("outer penalty expects 4 joints");
  double sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = q_outer[i] - cfg.outer_center[i];
    sq += d * d;
  }
  return cfg.w_outter * std::sqrt(sq);
}

double ActionRatePenalty(std::span<const double> a_t, std::span<const double> a_prev, double weight) {
  if (a_t.size() != a_prev.size()) throw ContractViolationError("action rate penalty: size mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < a_t.size(); ++i) sq += (a_t[i] - a_prev[i]) * (a_t[i] - a_prev[i]);
  return weight * sq;
}

double VelocityPenalty(std::span<const double> qd, double weight) {
  double sq = 0.0;
  for (double v : qd) sq += v * v;
  return weight * sq;
}

double RotationReward(double d_rot, double d_goal, const RotationRewardConfig& cfg) {
  const double gate = 1.0 / (1.0 + std::exp(cfg.sigmoid_gain * (d_goal - cfg.sigmoid_center)));
  return cfg.close_weight * (1.0 / (std::abs(d_rot) + cfg.eps_rot)) * gate;
}

double GoalBonus(double d_rot, double d_pos, const RotationRewardConfig& cfg) {
  return (d_rot < cfg.rot_threshold && d_pos < cfg.pos_threshold) ? cfg.goal_bonus : 0.0;
}

void RewardBreakdown::Add(const std::string& name, double value) {
  terms.emplace_back(name, value);
  total += value;
}

RewardBreakdown GraspReward(const GraspRewardInput& in, const GraspRewardConfig& cfg) {
  RewardBreakdown b;
  b.Add("torque", TorqueReward(in.finger_torque, in.contact, in.f_cmd, cfg));
  b.Add("force", ForceReward(in.finger_force, in.contact, in.f_cmd, cfg));
  b.Add("diff", ConsistencyPenalty(in.q_inner, cfg));
  b.Add("outter", OuterPenalty(in.q_outer, cfg));
  b.Add("action", ActionRatePenalty(in.action, in.last_action, cfg.w_action));
  b.Add("vel", VelocityPenalty(in.qd, cfg.w_vel));
  b.Add("terminal", in.failed ? cfg.w_terminal : 0.0);
  return b;
}

RewardBreakdown RotateReward(double d_rot, double d_pos, std::span<const double> action,
                             std::span<const double> last_action, const RotationRewardConfig& cfg) {
  RewardBreakdown b;
  b.Add("close", RotationReward(d_rot, d_pos, cfg));
  b.Add("bonus", GoalBonus(d_rot, d_pos, cfg));
  b.Add("action", ActionRatePenalty(action, last_action, cfg.action_weight));
  return b;
}

GraspRewardConfig ParseGraspRewardConfig(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) ju::Fail(path, "expected object");
  GraspRewardConfig c;
  c.w_torque = ju::NumberOr(j, "w_torque", c.w_torque, path);
  c.w_force = ju::NumberOr(j, "w_force", c.w_force, path);
  c.w_diff = ju::NumberOr(j, "w_diff", c.w_diff, path);
  c.w_outter = ju::NumberOr(j, "w_outter", c.w_outter, path);
  c.w_action = ju::NumberOr(j, "w_action", c.w_action, path);
  c.w_vel = ju::NumberOr(j, "w_vel", c.w_vel, path);
  c.w_terminal = ju::NumberOr(j, "w_terminal", c.w_terminal, path);
  c.sigma = ju::NumberOr(j, "sigma", c.sigma, path);
  c.tau_max = ju::NumberOr(j, "tau_max", c.tau_max, path);
  c.f_max = ju::NumberOr(j, "f_max", c.f_max, path);
  if (j.contains("torque_range")) c.torque_range = ju::ReadInterval(j["torque_range"], ju::Child(path, "torque_range"));
  if (j.contains("force_range")) c.force_range = ju::ReadInterval(j["force_range"], ju::Child(path, "force_range"));
  if (j.contains("outer_center")) {
    const auto v = ju::ReadNumbers(j["outer_center"], ju::Child(path, "outer_center"));
    if (v.size() != 4) ju::Fail(ju::Child(path, "outer_center"), "expected 4 numbers");
    for (int i = 0; i < 4; ++i) c.outer_center[i] = v[i];
  }
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    ju::Fail(path, e.what());
  }
  return c;
}

RotationRewardConfig ParseRotationRewardConfig(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) ju::Fail(path, "expected object");
  RotationRewardConfig c;
  c.close_weight = ju::NumberOr(j, "close_weight", c.close_weight, path);
  c.action_weight = ju::NumberOr(j, "action_weight", c.action_weight, path);
  c.goal_bonus = ju::NumberOr(j, "goal_bonus", c.goal_bonus, path);
  c.rot_threshold = ju::NumberOr(j, "rot_threshold", c.rot_threshold, path);
  c.pos_threshold = ju::NumberOr(j, "pos_threshold", c.pos_threshold, path);
  c.sigmoid_gain = ju::NumberOr(j, "sigmoid_gain", c.sigmoid_gain, path);
  c.sigmoid_center = ju::NumberOr(j, "sigmoid_center", c.sigmoid_center, path);
  c.eps_rot = ju::NumberOr(j, "eps_rot", c.eps_rot, path);
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    ju::Fail(path, e.what());
  }
  return c;
}

nlohmann::json GraspRewardConfigToJson(const GraspRewardConfig& c) {
  return {{"w_torque", c.w_torque},
          {"w_force", c.w_force},
          {"w_diff", c.w_diff},
          {"w_outter", c.w_outter},
          {"w_action", c.w_action},
          {"w_vel", c.w_vel},
          {"w_terminal", c.w_terminal},
          {"sigma", c.sigma},
          {"tau_max", c.tau_max},
          {"f_max", c.f_max},
          {"torque_range", {c.torque_range.first, c.torque_range.second}},
          {"force_range", {c.force_range.first, c.force_range.second}},
          {"outer_center", c.outer_center}};
}

nlohmann::json RotationRewardConfigToJson(const RotationRewardConfig& c) {
  return {{"close_weight", c.close_weight},
          {"action_weight", c.action_weight},
          {"goal_bonus", c.goal_bonus},
          {"rot_threshold", c.rot_threshold},
          {"pos_threshold", c.pos_threshold},
          {"sigmoid_gain", c.sigmoid_gain},
          {"sigmoid_center", c.sigmoid_center},
          {"eps_rot", c.eps_rot}};
}

}  // namespace taxelsim
