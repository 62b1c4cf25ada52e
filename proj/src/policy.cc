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

#include "taxelsim/policy.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "taxelsim/errors.h"

namespace taxelsim {

namespace {

constexpr double kCloseFraction = 0.6;
constexpr int kCloseRampSteps = 30;
constexpr double kRotateAmplitude = 0.25;
constexpr int kRotatePeriod = 40;

std::vector<double> RestPose(const HandModel& hand) {
  const auto lo = hand.lower_limits();
  const auto hi = hand.upper_limits();
  std::vector<double> q(lo.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = std::clamp(0.0, lo[j], hi[j]);
  return q;
}

std::vector<double> ScriptedClose(const Env& env) {
  const HandModel& hand = env.config().hand;
  const auto hi = hand.upper_limits();
  std::vector<double> a = RestPose(hand);
  const double ramp = std::min(1.0, static_cast<double>(env.state().step) / kCloseRampSteps);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += ramp * kCloseFraction * (hi[j] - a[j]);
  return a;
}

// Finger gait: each finger flexes and extends sinusoidally, phase-shifted
// by finger so neighbours alternate.
std::vector<double> ScriptedRotate(const Env& env) {
  const HandModel& hand = env.config().hand;
  const auto hi = hand.upper_limits();
  std::vector<double> a = RestPose(hand);
  const double t = static_cast<double>(env.state().step) / kRotatePeriod;
  for (int f = 0; f < static_cast<int>(hand.fingers.size()); ++f) {
    const double phase = 2.0 * std::numbers::pi * (t + 0.5 * f);
    const double s = 0.5 + 0.5 * std::sin(phase);
    const int first = hand.joint_offset(f);
    const int count = static_cast<int>(hand.fingers[f].joints.size());
    for (int k = 0; k < count; ++k) {
      const int j = first + k;
      a[j] = std::min(hi[j], a[j] + kRotateAmplitude * s);
    }
  }
  return a;
}

}  // namespace

Policy MakePolicy(const std::string& name) {
  if (name == "zero") {
    return [](const Observation&, const Env& env) {
      return std::vector<double>(static_cast<std::size_t>(env.config().hand.num_joints()), 0.0);
    };
  }
  if (name == "scripted-close") {
    return [](const Observation&, const Env& env) { return ScriptedClose(env); };
  }
  if (name == "scripted-rotate") {
    return [](const Observation&, const Env& env) { return ScriptedRotate(env); };
  }
  throw ConfigError("unknown policy '" + name + "'");
}

Policy MakeStreamPolicy(std::istream& in, std::ostream& out) {
  return [&in, &out](const Observation& obs, const Env&) {
    out << nlohmann::json(obs.actor).dump() << '\n' << std::flush;
    std::string line;
    if (!std::getline(in, line)) throw ContractViolationError("external policy: input closed");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ContractViolationError(std::string("external policy: malformed action line: ") + e.what());
    }
    if (!j.is_array()) throw ContractViolationError("external policy: action must be a JSON array");
    std::vector<double> a;
    for (const auto& v : j) {
      if (!v.is_number()) throw ContractViolationError("external policy: action entries must be numbers");
      a.push_back(v.get<double>());
    }
    return a;
  };
}

}  // namespace taxelsim
