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

// Non-ideal joint actuator:
//
//   tau_c = kp (q_ref - q_m) + kd (qd_ref - qd_m)               PD
//   tau_b = 0 if |q_ref - q_m| < eps, else tau_c                 gear backlash
//   e(qd) = tau_0 * max(0, 1 - |qd| / qd_max)                    DC motor envelope
//   tau   = eta * clip(tau_b, -e(qd), +e(qd))
//
// The envelope is floored at zero: past no-load speed the motor delivers
// no torque.

#ifndef TAXELSIM_ACTUATOR_H_
#define TAXELSIM_ACTUATOR_H_

#include <string>
#include <utility>

#include <json.hpp>

#include "taxelsim/random.h"

namespace taxelsim {

struct ActuatorParams {
  double kp = 2.0;              // N m / rad
  double kd = 0.05;             // N m s / rad
  double backlash = 0.005;      // rad
  double stall_torque = 0.8;    // N m
  double no_load_speed = 10.0;  // rad/s
  double efficiency = 1.0;      // (0, 1]

  // Throws ConfigError when an invariant is violated.
  void Validate() const;
};

using Interval = std::pair<double, double>;

// Sampling intervals, one per ActuatorParams field. Defaults are artifact
// choices around the nominal parameters above.
struct ActuatorRanges {
  Interval kp{1.6, 2.4};
  Interval kd{0.04, 0.06};
  Interval backlash{0.0, 0.01};
  Interval stall_torque{0.7, 0.9};
  Interval no_load_speed{8.0, 12.0};
  Interval efficiency{0.7, 1.0};

  // Well-ordered intervals whose every point satisfies the parameter
  // invariants; throws ConfigError otherwise.
  void Validate() const;
};

double PdTorque(const ActuatorParams& p, double q_ref, double q_m, double qd_ref, double qd_m);
double ApplyBacklash(const ActuatorParams& p, double tau_c, double q_ref, double q_m);
double TorqueEnvelope(const ActuatorParams& p, double qd);
double Saturate(const ActuatorParams& p, double tau_b, double qd);
double StepActuator(const ActuatorParams& p, double q_ref, double q_m, double qd_ref, double qd_m);

// Draws every field uniformly from its interval, in declaration order.
ActuatorParams SampleActuatorParams(const ActuatorRanges& ranges, RngStream& stream);

ActuatorRanges ParseActuatorRanges(const nlohmann::json& j, const std::string& path);
nlohmann::json ActuatorRangesToJson(const ActuatorRanges& ranges);
nlohmann::json ActuatorParamsToJson(const ActuatorParams& params);

}  // namespace taxelsim

#endif  // TAXELSIM_ACTUATOR_H_
