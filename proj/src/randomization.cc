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

#include "taxelsim/randomization.h"

#include <cmath>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

namespace {

void CheckInterval(const Interval& i, const char* name, double min_low, bool strict) {
  if (!std::isfinite(i.first) || !std::isfinite(i.second) || !(i.first <= i.second)) {
    throw ConfigError(std::string("randomization: ") + name + " interval must be finite and ordered");
  }
  if (strict ? !(i.first > min_low) : !(i.first >= min_low)) {
    throw ConfigError(std::string("randomization: ") + name +
                      (strict ? " must be positive" : " must be non-negative"));
  }
}

double DrawOr(RngStream& stream, const std::optional<Interval>& interval, double nominal) {
  return interval ? stream.Uniform(interval->first, interval->second) : stream.Uniform(nominal, nominal);
}

}  // namespace

void RandomizationSpec::Validate() const {
  if (object_mass) CheckInterval(*object_mass, "object_mass", 0.0, true);
  CheckInterval(object_scale, "object_scale", 0.0, true);
  if (friction) CheckInterval(*friction, "friction", 0.0, false);
  if (restitution) {
    CheckInterval(*restitution, "restitution", 0.0, false);
    if (restitution->second > 1.0) throw ConfigError("randomization: restitution must not exceed 1");
  }
  if (damping) CheckInterval(*damping, "damping", 0.0, false);
  CheckInterval(drop_height, "drop_height", -INFINITY, false);
  CheckInterval(f_cmd, "f_cmd", 0.0, false);
  if (f_cmd.second > 1.0) throw ConfigError("randomization: f_cmd must lie in [0, 1]");
  actuator.Validate();
}

EpisodeDraw DrawEpisode(const RandomizationSpec& spec, const ObjectNominal& nominal,
                        int num_joints, RngStream& stream) {
  spec.Validate();
  if (!(nominal.density > 0.0) || !(nominal.volume > 0.0)) {
    throw ConfigError("randomization: nominal density and volume must be positive");
  }
  EpisodeDraw d;
  d.seed = stream.master_seed();
  d.stream_index = stream.index();
  d.object_scale = stream.Uniform(spec.object_scale.first, spec.object_scale.second);
  const double s3 = d.object_scale * d.object_scale * d.object_scale;
  d.object_mass = DrawOr(stream, spec.object_mass, nominal.density * nominal.volume * s3);
  d.friction = DrawOr(stream, spec.friction, nominal.friction);
  d.restitution = DrawOr(stream, spec.restitution, nominal.restitution);
  d.damping = DrawOr(stream, spec.damping, nominal.damping);
  d.drop_height = stream.Uniform(spec.drop_height.first, spec.drop_height.second);
  const Quaternion q = stream.UniformQuaternion();
  d.orientation = spec.random_orientation ? q : Quaternion{1.0, 0.0, 0.0, 0.0};
  d.actuators.reserve(static_cast<std::size_t>(num_joints));
  for (int j = 0; j < num_joints; ++j) d.actuators.push_back(SampleActuatorParams(spec.actuator, stream));
  d.f_cmd = stream.Uniform(spec.f_cmd.first, spec.f_cmd.second);
  return d;
}

RandomizationSpec ParseRandomizationSpec(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) ju::Fail(path, "expected object");
  RandomizationSpec s;
  auto optional = [&](const char* key, std::optional<Interval>* out) {
    if (j.contains(key)) *out = ju::ReadInterval(j[key], ju::Child(path, key));
  };
  auto interval = [&](const char* key, Interval* out) {
    if (j.contains(key)) *out = ju::ReadInterval(j[key], ju::Child(path, key));
  };
  optional("object_mass", &s.object_mass);
  interval("object_scale", &s.object_scale);
  optional("friction", &s.friction);
  optional("restitution", &s.restitution);
  optional("damping", &s.damping);
  interval("drop_height", &s.drop_height);
  interval("f_cmd", &s.f_cmd);
  s.random_orientation = ju::BoolOr(j, "random_orientation", s.random_orientation, path);
  if (j.contains("actuator")) s.actuator = ParseActuatorRanges(j["actuator"], ju::Child(path, "actuator"));
  try {
    s.Validate();
  } catch (const ConfigError& e) {
    ju::Fail(path, e.what());
  }
  return s;
}

nlohmann::json RandomizationSpecToJson(const RandomizationSpec& s) {
  auto iv = [](const Interval& i) { return ju::Json::array({i.first, i.second}); };
  ju::Json j = {{"object_scale", iv(s.object_scale)},
                {"drop_height", iv(s.drop_height)},
                {"f_cmd", iv(s.f_cmd)},
                {"random_orientation", s.random_orientation},
                {"actuator", ActuatorRangesToJson(s.actuator)}};
  if (s.object_mass) j["object_mass"] = iv(*s.object_mass);
  if (s.friction) j["friction"] = iv(*s.friction);
  if (s.restitution) j["restitution"] = iv(*s.restitution);
  if (s.damping) j["damping"] = iv(*s.damping);
  return j;
}

nlohmann::json EpisodeDrawToJson(const EpisodeDraw& d) {
  ju::Json actuators = ju::Json::array();
  for (const auto& a : d.actuators) actuators.push_back(ActuatorParamsToJson(a));
  return {{"seed", d.seed},
          {"stream_index", d.stream_index},
          {"object_mass", d.object_mass},
          {"object_scale", d.object_scale},
          {"friction", d.friction},
          {"restitution", d.restitution},
          {"damping", d.damping},
          {"drop_height", d.drop_height},
          {"orientation", {d.orientation.w, d.orientation.x, d.orientation.y, d.orientation.z}},
          {"actuators", actuators},
          {"f_cmd", d.f_cmd}};
}

EpisodeDraw EpisodeDrawFromJson(const nlohmann::json& j) {
  EpisodeDraw d;
  const auto u64 = [&](const char* key) {
    const ju::Json& v = ju::Require(j, key, "");
    if (!v.is_number_unsigned() && !v.is_number_integer()) ju::Fail(key, "expected integer");
    return v.get<std::uint64_t>();
  };
  d.seed = u64("seed");
  d.stream_index = u64("stream_index");
  d.object_mass = ju::Number(ju::Require(j, "object_mass", ""), "object_mass");
  d.object_scale = ju::Number(ju::Require(j, "object_scale", ""), "object_scale");
  d.friction = ju::Number(ju::Require(j, "friction", ""), "friction");
  d.restitution = ju::Number(ju::Require(j, "restitution", ""), "restitution");
  d.damping = ju::Number(ju::Require(j, "damping", ""), "damping");
  d.drop_height = ju::Number(ju::Require(j, "drop_height", ""), "drop_height");
  const auto q = ju::ReadNumbers(ju::Require(j, "orientation", ""), "orientation");
  if (q.size() != 4) ju::Fail("orientation", "expected [w, x, y, z]");
  d.orientation = {q[0], q[1], q[2], q[3]};
  const ju::Json& acts = ju::Require(j, "actuators", "");
  if (!acts.is_array()) ju::Fail("actuators", "expected array");
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const std::string p = ju::Index("actuators", i);
    ActuatorParams a;
    a.kp = ju::Number(ju::Require(acts[i], "kp", p), ju::Child(p, "kp"));
    a.kd = ju::Number(ju::Require(acts[i], "kd", p), ju::Child(p, "kd"));
    a.backlash = ju::Number(ju::Require(acts[i], "backlash", p), ju::Child(p, "backlash"));
    a.stall_torque = ju::Number(ju::Require(acts[i], "stall_torque", p), ju::Child(p, "stall_torque"));
    a.no_load_speed = ju::Number(ju::Require(acts[i], "no_load_speed", p), ju::Child(p, "no_load_speed"));
    a.efficiency = ju::Number(ju::Require(acts[i], "efficiency", p), ju::Child(p, "efficiency"));
    d.actuators.push_back(a);
  }
  d.f_cmd = ju::Number(ju::Require(j, "f_cmd", ""), "f_cmd");
  return d;
}

}  // namespace taxelsim
