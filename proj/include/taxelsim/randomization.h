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

// Per-episode domain randomization.
//
// A draw always consumes the same number of values from its stream, in a
// fixed order, whatever the RandomizationSpec holds. Absent intervals fall back to
// the object's nominal properties.

#ifndef TAXELSIM_RANDOMIZATION_H_
#define TAXELSIM_RANDOMIZATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/actuator.h"
#include "taxelsim/random.h"
#include "taxelsim/rotation.h"

namespace taxelsim {

// Unrandomized object properties.
struct ObjectNominal {
  double density = 400.0;  // kg/m^3
  double volume = 0.0;     // m^3 at scale 1
  double friction = 1.0;
  double restitution = 0.0;
  double damping = 0.0;  // 1/s, linear and angular
};

struct RandomizationSpec {
  std::optional<Interval> object_mass;  // kg; absent: density * volume * scale^3
  Interval object_scale{1.0, 1.0};
  std::optional<Interval> friction;
  std::optional<Interval> restitution;
  std::optional<Interval> damping;
  Interval drop_height{0.15, 0.25};  // m above the palm
  bool random_orientation = true;
  ActuatorRanges actuator;
  Interval f_cmd{0.0, 1.0};

  void Validate() const;
};

struct EpisodeDraw {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  double object_mass = 0.0;
  double object_scale = 1.0;
  double friction = 0.0;
  double restitution = 0.0;
  double damping = 0.0;
  double drop_height = 0.0;
  Quaternion orientation;
  std::vector<ActuatorParams> actuators;
  double f_cmd = 0.0;
};

// Draw order: scale, mass, friction, restitution, damping, drop height,
// orientation (3 values), then each joint's actuator parameters, then
// F_cmd. Throws ConfigError for an invalid spec.
EpisodeDraw DrawEpisode(const RandomizationSpec& spec, const ObjectNominal& nominal,
                        int num_joints, RngStream& stream);

RandomizationSpec ParseRandomizationSpec(const nlohmann::json& j, const std::string& path);
nlohmann::json RandomizationSpecToJson(const RandomizationSpec& spec);
nlohmann::json EpisodeDrawToJson(const EpisodeDraw& draw);
EpisodeDraw EpisodeDrawFromJson(const nlohmann::json& j);

}  // namespace taxelsim

#endif  // TAXELSIM_RANDOMIZATION_H_
