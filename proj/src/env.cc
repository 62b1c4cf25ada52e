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

#include "taxelsim/env.h"

#include <algorithm>
#include <cmath>

#include "taxelsim/actuator.h"
#include "taxelsim/errors.h"

namespace taxelsim {

namespace {

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void Append(std::vector<double>& out, const Vec3& v) {
  out.push_back(v.x());
  out.push_back(v.y());
  out.push_back(v.z());
}

void Append(std::vector<double>& out, const Rotation6D& r) {
  const auto a = r.ToArray();
  out.insert(out.end(), a.begin(), a.end());
}

}  // namespace

Vec3 NetContactForce(std::span<const FingertipTactile> tactile) {
  Vec3 total = Vec3::Zero();
  for (const auto& finger : tactile) {
    for (const auto& r : finger.readings) {
      if (r.active) total -= r.force * r.surface_normal;
    }
  }
  return total;
}

Mat3 ShiftGoal(const Mat3& goal, const Vec3& axis) { return QuarterTurn(axis) * goal; }

Env::Env(std::shared_ptr<const EnvConfig> config, std::uint64_t seed, std::uint64_t index)
    : config_(std::move(config)), stream_(seed, index) {
  if (!config_) throw ContractViolationError("Env: null config");
  lower_ = config_->hand.lower_limits();
  upper_ = config_->hand.upper_limits();
}

Mat3 Env::WorldInverseInertia() const {
  const Mat3& r = state_.object_pose.rotation;
  return r * body_inertia_inv_ * r.transpose();
}

double Env::object_kinetic_energy() const {
  const Vec3 wb = state_.object_pose.rotation.transpose() * state_.object_angular_velocity;
  return 0.5 * mass_ * state_.object_velocity.squaredNorm() + 0.5 * wb.dot(body_inertia_ * wb);
}

Observation Env::Reset() {
  const EnvConfig& c = *config_;
  const int n = c.hand.num_joints();
  draw_ = DrawEpisode(c.randomization, c.object, n, stream_);
  shape_ = c.shape.Scaled(draw_.object_scale);
  mass_ = draw_.object_mass;
  body_inertia_ = mass_ * shape_.UnitInertia();
  body_inertia_inv_ = body_inertia_.inverse();

  state_ = EnvState{};
  state_.joints = JointState::Zero(n);
  for (int j = 0; j < n; ++j) state_.joints.q[j] = std::clamp(0.0, lower_[j], upper_[j]);
  state_.applied_torque.assign(static_cast<std::size_t>(n), 0.0);
  state_.last_action = state_.joints.q;
  state_.f_cmd = draw_.f_cmd;

  if (c.task == Task::kGrasp) {
    state_.object_pose.translation = Vec3(c.grasp.spawn_x, c.grasp.spawn_y, draw_.drop_height);
    state_.object_pose.rotation = QuaternionToMatrix(draw_.orientation);
  } else {
    state_.object_pose = c.rotate.object_pose;
    state_.goal = ShiftGoal(state_.object_pose.rotation, c.rotate.axis);
    state_.initial_goal = state_.goal;
  }
  state_.reference_position = state_.object_pose.translation;

  const TaxelFrameBatch frames = ForwardKinematics(c.hand, state_.joints.q);
  prev_taxels_ = frames.positions;
  state_.fingertip_poses = frames.fingertip_poses;
  state_.fingertip_linear_velocity.assign(frames.fingertip_poses.size(), Vec3::Zero());
  state_.fingertip_angular_velocity.assign(frames.fingertip_poses.size(), Vec3::Zero());
  Sense();
  return Observe();
}

void Env::Sense() {
  const EnvConfig& c = *config_;
  const TaxelFrameBatch frames = ForwardKinematics(c.hand, state_.joints.q);
  state_.tactile = SenseHand(frames, shape_, state_.object_pose, c.material);
  state_.observed_object_position = state_.object_pose.translation;
  if (c.task == Task::kGrasp && c.grasp.position_noise > 0.0) {
    for (int i = 0; i < 3; ++i) {
      state_.observed_object_position[i] += stream_.Normal(0.0, c.grasp.position_noise);
    }
  }
}

void Env::CheckFinite(const char* where, int substep) const {
  auto fail = [&](const std::string& what) {
    throw PoisonedStateError("env " + std::to_string(stream_.index()) + " step " +
                             std::to_string(state_.step) + " " + where + " " +
                             std::to_string(substep) + ": non-finite " + what);
  };
  if (!AllFinite(state_.joints.q)) fail("joint position");
  if (!AllFinite(state_.joints.qd)) fail("joint velocity");
  if (!AllFinite(state_.applied_torque)) fail("joint torque");
  if (!state_.object_pose.translation.allFinite()) fail("object position");
  if (!state_.object_pose.rotation.allFinite()) fail("object orientation");
  if (!state_.object_velocity.allFinite()) fail("object velocity");
  if (!state_.object_angular_velocity.allFinite()) fail("object angular velocity");
}

void Env::ApplyImpulse(const Vec3& r, const Vec3& impulse) {
  state_.object_velocity += impulse / mass_;
  state_.object_angular_velocity += WorldInverseInertia() * r.cross(impulse);
}

void Env::ResolveContacts(double h, std::span<const FingertipTactile> tactile,
                          std::span<const Vec3> taxel_velocity, const TaxelFrameBatch& frames) {
  const double e = draw_.restitution;
  const double mu = draw_.friction;
  const Vec3 com = state_.object_pose.translation;
  for (std::size_t f = 0; f < tactile.size(); ++f) {
    const auto& readings = tactile[f].readings;
    for (std::size_t j = 0; j < readings.size(); ++j) {
      const TaxelReading& rd = readings[j];
      if (!rd.active) continue;
      const Vec3& n = rd.surface_normal;
      const Vec3 r = rd.surface_point - com;
      const Vec3 vt = taxel_velocity[static_cast<std::size_t>(frames.offsets[f]) + j];
      const Mat3 inv_i = WorldInverseInertia();
      auto inv_mass_along = [&](const Vec3& d) {
        const Vec3 rd_cross = r.cross(d);
        return 1.0 / mass_ + rd_cross.dot(inv_i * rd_cross);
      };

      // Normal: the impulse pushes the object along -n.
      const Vec3 v_point = state_.object_velocity + state_.object_angular_velocity.cross(r);
      const double approach = -(vt - v_point).dot(n);
      const double m_n = 1.0 / inv_mass_along(n);
      const double jn = approach > 0.0 ? std::min(rd.force * h, m_n * (1.0 + e) * approach)
                                       : e * rd.force * h;
      if (jn <= 0.0) continue;
      ApplyImpulse(r, -jn * n);

      // Tangential: drag the contact point toward the taxel's velocity.
      const Vec3 v_after = state_.object_velocity + state_.object_angular_velocity.cross(r);
      const Vec3 rel = vt - v_after;
      const Vec3 slip = rel - rel.dot(n) * n;
      const double slip_speed = slip.norm();
      if (slip_speed <= 1e-12 || mu <= 0.0) continue;
      const Vec3 t = slip / slip_speed;
      const double m_t = 1.0 / inv_mass_along(t);
      const double jt = std::min(mu * jn, m_t * slip_speed);
      ApplyImpulse(r, jt * t);
    }
  }
}

void Env::Substep(double h, std::span<const double> q_ref, int substep) {
  const EnvConfig& c = *config_;
  const int n = c.hand.num_joints();
  auto& q = state_.joints.q;
  auto& qd = state_.joints.qd;
  for (int j = 0; j < n; ++j) {
    const double tau = StepActuator(draw_.actuators[j], q_ref[j], q[j], 0.0, qd[j]);
    state_.applied_torque[j] = tau;
    qd[j] += h * (tau - c.physics.joint_damping[j] * qd[j]) / c.physics.joint_inertia[j];
    q[j] += h * qd[j];
    if (q[j] < lower_[j]) {
      q[j] = lower_[j];
      qd[j] = std::max(0.0, qd[j]);
    } else if (q[j] > upper_[j]) {
      q[j] = upper_[j];
      qd[j] = std::min(0.0, qd[j]);
    }
  }

  const TaxelFrameBatch frames = ForwardKinematics(c.hand, q);
  std::vector<Vec3> taxel_velocity(frames.positions.size());
  for (std::size_t i = 0; i < frames.positions.size(); ++i) {
    taxel_velocity[i] = (frames.positions[i] - prev_taxels_[i]) / h;
  }

  state_.object_velocity += c.physics.gravity * h;
  if (c.physics.contacts) {
    const auto tactile = SenseHand(frames, shape_, state_.object_pose, c.material);
    ResolveContacts(h, tactile, taxel_velocity, frames);
  }
  const double damp = 1.0 / (1.0 + draw_.damping * h);
  state_.object_velocity *= damp;
  state_.object_angular_velocity *= damp;

  Transform& pose = state_.object_pose;
  pose.translation += state_.object_velocity * h;
  const Vec3 wb = pose.rotation.transpose() * state_.object_angular_velocity;
  pose.rotation = Orthonormalize(pose.rotation * ExpMap(wb * h));
  state_.object_angular_velocity = pose.rotation * wb;

  prev_taxels_ = frames.positions;
  CheckFinite("substep", substep);
}

StepResult Env::Step(std::span<const double> action) {
  const EnvConfig& c = *config_;
  const int n = c.hand.num_joints();
  if (state_.done) throw ContractViolationError("Step called on a finished episode");
  if (static_cast<int>(action.size()) != n) {
    throw ContractViolationError("action has " + std::to_string(action.size()) + " entries, expected " +
                                 std::to_string(n));
  }
  if (!AllFinite(action)) throw ContractViolationError("action contains non-finite values");

  std::vector<double> q_ref(action.begin(), action.end());
  for (int j = 0; j < n; ++j) q_ref[j] = std::clamp(q_ref[j], lower_[j], upper_[j]);

  const std::vector<Transform> tips_before = state_.fingertip_poses;
  const double h = c.physics.control_dt / c.physics.substeps;
  try {
    for (int k = 0; k < c.physics.substeps; ++k) Substep(h, q_ref, k);
  } catch (const PoisonedStateError&) {
    state_.done = true;
    throw;
  }

  const TaxelFrameBatch frames = ForwardKinematics(c.hand, state_.joints.q);
  state_.fingertip_poses = frames.fingertip_poses;
  for (std::size_t f = 0; f < frames.fingertip_poses.size(); ++f) {
    const Transform& a = tips_before[f];
    const Transform& b = frames.fingertip_poses[f];
    state_.fingertip_linear_velocity[f] = (b.translation - a.translation) / c.physics.control_dt;
    state_.fingertip_angular_velocity[f] =
        LogMap(b.rotation * a.rotation.transpose()) / c.physics.control_dt;
  }
  Sense();
  ++state_.step;

  StepResult result;
  const Vec3& x = state_.object_pose.translation;
  if (c.task == Task::kGrasp) {
    GraspRewardInput in;
    int touching = 0;
    for (int f = 0; f < kNumFingers; ++f) {
      in.finger_torque[f] = state_.applied_torque[c.hand.finger_root_joints[f]];
      in.finger_force[f] = state_.tactile[f].total_force;
      in.contact[f] = state_.tactile[f].active_count > 0;
      touching += in.contact[f] ? 1 : 0;
    }
    for (int i = 0; i < 4; ++i) {
      in.q_inner[i] = state_.joints.q[c.hand.consistency_joints[i]];
      in.q_outer[i] = state_.joints.q[c.hand.outer_joints[i]];
    }
    in.f_cmd = state_.f_cmd;
    in.action = action;
    in.last_action = state_.last_action;
    in.qd = state_.joints.qd;
    in.failed = x.z() < c.grasp.floor_z;
    result.reward = GraspReward(in, c.grasp_reward);

    const bool holding = state_.object_velocity.norm() < c.grasp.hold_speed && touching >= c.grasp.hold_fingers;
    state_.hold_count = holding ? state_.hold_count + 1 : 0;
    result.success_event = state_.hold_count == c.grasp.hold_steps;
    if (in.failed) {
      result.terminated = true;
      result.reason = "floor";
    }
  } else {
    const double d_rot = RotationDistance(state_.object_pose.rotation, state_.goal);
    const double d_pos = (x - state_.reference_position).norm();
    result.reward = RotateReward(d_rot, d_pos, action, state_.last_action, c.rotate_reward);
    result.success_event = d_rot < c.rotate_reward.rot_threshold && d_pos < c.rotate_reward.pos_threshold;
    if (result.success_event) state_.goal = ShiftGoal(state_.goal, c.rotate.axis);
    if (d_pos > c.rotate.max_drift) {
      result.terminated = true;
      result.reason = "drift";
    }
  }
  if (result.success_event) ++state_.success_count;
  if (!result.terminated && state_.step >= c.max_steps) {
    result.truncated = true;
    result.reason = "budget";
  }
  state_.done = result.terminated || result.truncated;
  state_.last_action.assign(action.begin(), action.end());
  result.observation = Observe();
  return result;
}

Observation Env::Observe() const {
  const EnvConfig& c = *config_;
  const int n = c.hand.num_joints();
  Observation obs;
  std::vector<double>& a = obs.actor;
  a.reserve(static_cast<std::size_t>(CriticLayout(c.task).size()));
  a.insert(a.end(), state_.joints.q.begin(), state_.joints.q.end());
  if (c.task == Task::kGrasp) {
    for (int j = 0; j < n; ++j) a.push_back(c.calibration.NormalizeTorque(state_.applied_torque[j], j));
    Append(a, state_.observed_object_position);
    Append(a, state_.object_velocity);
    for (const auto& t : state_.tactile) a.push_back(t.total_force);
    for (const auto& t : state_.tactile) Append(a, t.contact_center);
    for (const auto& p : state_.fingertip_poses) Append(a, p.translation);
    a.push_back(state_.f_cmd);
    obs.critic = a;
  } else {
    const Mat3& r = state_.object_pose.rotation;
    Append(a, Encode6D(r.transpose() * state_.goal));
    a.insert(a.end(), state_.last_action.begin(), state_.last_action.end());
    for (const auto& t : state_.tactile) Append(a, t.contact_center);
    for (const auto& t : state_.tactile) a.push_back(t.total_force);
    for (const auto& p : state_.fingertip_poses) Append(a, p.translation);
    std::vector<double>& cr = obs.critic;
    cr = a;
    Append(cr, Encode6D(r));
    for (std::size_t f = 0; f < state_.fingertip_poses.size(); ++f) {
      Append(cr, state_.fingertip_linear_velocity[f]);
      Append(cr, state_.fingertip_angular_velocity[f]);
    }
    for (const auto& p : state_.fingertip_poses) Append(cr, Encode6D(p.rotation));
    cr.insert(cr.end(), state_.joints.qd.begin(), state_.joints.qd.end());
    Append(cr, state_.object_velocity);
    Append(cr, state_.object_angular_velocity);
  }
  if (static_cast<int>(obs.actor.size()) != ActorLayout(c.task).size() ||
      static_cast<int>(obs.critic.size()) != CriticLayout(c.task).size()) {
    throw ModelMismatchError("observation size does not match its layout");
  }
  return obs;
}

}  // namespace taxelsim
