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

#include "taxelsim/actuator.h"

#include <algorithm>
#include <cmath>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

void ActuatorParams::Validate() const {
  if (!(kp > 0.0)) throw ConfigError("actuator: kp must be positive");
  if (!(kd >= 0.0)) throw ConfigError("actuator: kd must be non-negative");
  if (!(backlash >= 0.0)) throw ConfigError("actuator: backlash must be non-negative");
  if (!(stall_torque > 0.0)) throw ConfigError("actuator: stall_torque must be positive");
  if (!(no_load_speed > 0.0)) throw ConfigError("actuator: no_load_speed must be positive");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("actuator: efficiency must be in (0, 1]");
}

void ActuatorRanges::Validate() const {
  auto ordered = [](const Interval& i, const char* name) {
    if (!(i.first <= i.second) || !std::isfinite(i.first) || !std::isfinite(i.second)) {
      throw ConfigError(std::string("actuator ranges: ") + name + " low exceeds high");
    }
  };
  ordered(kp, "kp");
  ordered(kd, "kd");
  ordered(backlash, "backlash");
  ordered(stall_torque, "stall_torque");
  ordered(no_load_speed, "no_load_speed");
  ordered(efficiency, "efficiency");
  // Interval endpoints bound every sample, so checking both corners covers
  // the whole box.
  ActuatorParams lo{kp.first, kd.first, backlash.first, stall_torque.first, no_load_speed.first,
                    efficiency.first};
  ActuatorParams hi{kp.second, kd.second, backlash.second, stall_torque.second,
                    no_load_speed.second, efficiency.second};
  lo.Validate();
  hi.Validate();
}

double PdTorque(const ActuatorParams& p, double q_ref, double q_m, double qd_ref, double qd_m) {
  return p.kp * (q_ref - q_m) + p.kd * (qd_ref - qd_m);
}

double ApplyBacklash(const ActuatorParams& p, double tau_c, double q_ref, double q_m) {
  return std::abs(q_ref - q_m) < p.backlash ? 0.0 : tau_c;
}

double TorqueEnvelope(const ActuatorParams& p, double qd) {
  return p.stall_torque * std::max(0.0, 1.0 - std::abs(qd) / p.no_load_speed);
}

double Saturate(const ActuatorParams& p, double tau_b, double qd) {
  const double e = TorqueEnvelope(p, qd);
  return p.efficiency * std::clamp(tau_b, -e, e);
}

double StepActuator(const ActuatorParams& p, double q_ref, double q_m, double qd_ref, double qd_m) {
  const double tau_c = PdTorque(p, q_ref, q_m, qd_ref, qd_m);
  return Saturate(p, ApplyBacklash(p, tau_c, q_ref, q_m), qd_m);
}

ActuatorParams SampleActuatorParams(const ActuatorRanges& r, RngStream& stream) {
  r.Validate();
  ActuatorParams p;
  p.kp = stream.Uniform(r.kp.first, r.kp.second);
  p.kd = stream.Uniform(r.kd.first, r.kd.second);
  p.backlash = stream.Uniform(r.backlash.first, r.backlash.second);
  p.stall_torque = stream.Uniform(r.stall_torque.first, r.stall_torque.second);
  p.no_load_speed = stream.Uniform(r.no_load_speed.first, r.no_load_speed.second);
  p.efficiency = stream.Uniform(r.efficiency.first, r.efficiency.second);
  return p;
}

ActuatorRanges ParseActuatorRanges(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) ju::Fail(path, "expected object");
  ActuatorRanges r;
  auto read = [&](const char* key, Interval* out) {
    if (j.contains(key)) *out = ju::ReadInterval(j[key], ju::Child(path, key));
  };
  read("kp", &r.kp);
  read("kd", &r.kd);
  read("backlash", &r.backlash);
  read("stall_torque", &r.stall_torque);
  read("no_load_speed", &r.no_load_speed);
  read("efficiency", &r.efficiency);
  try {
    r.Validate();
  } catch (const ConfigError& e) {
    ju::Fail(path, e.what());
  }
  return r;
}

nlohmann::json ActuatorRangesToJson(const ActuatorRanges& r) {
  auto iv = [](const Interval& i) { return ju::Json::array({i.first, i.second}); };
  return {{"kp", iv(r.kp)},
          {"kd", iv(r.kd)},
          {"backlash", iv(r.backlash)},
          {"stall_torque", iv(r.stall_torque)},
          {"no_load_speed", iv(r.no_load_speed)},
          {"efficiency", iv(r.efficiency)}};
}

nlohmann::json ActuatorParamsToJson(const ActuatorParams& p) {
  return {{"kp", p.kp},
          {"kd", p.kd},
          {"backlash", p.backlash},
          {"stall_torque", p.stall_torque},
          {"no_load_speed", p.no_load_speed},
          {"efficiency", p.efficiency}};
}

}  // namespace taxelsim
