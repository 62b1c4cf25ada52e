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

#include "taxelsim/observation.h"

#include "taxelsim/errors.h"

namespace taxelsim {

ObservationLayout& ObservationLayout::Add(const std::string& name, int size) {
  slices_.push_back({name, size_, size});
  size_ += size;
  return *this;
}

const ObservationSlice& ObservationLayout::Find(const std::string& name) const {
  for (const auto& s : slices_) {
    if (s.name == name) return s;
  }
  throw ContractViolationError("observation layout has no slice '" + name + "'");
}

std::vector<double> ObservationLayout::Pack(
    const std::map<std::string, std::vector<double>>& values) const {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(size_));
  for (const auto& s : slices_) {
    auto it = values.find(s.name);
    if (it == values.end()) throw ContractViolationError("Pack: missing slice '" + s.name + "'");
    if (static_cast<int>(it->second.size()) != s.size) {
      throw ContractViolationError("Pack: slice '" + s.name + "' has size " +
                                   std::to_string(it->second.size()) + ", expected " +
                                   std::to_string(s.size));
    }
    flat.insert(flat.end(), it->second.begin(), it->second.end());
  }
  return flat;
}

std::map<std::string, std::vector<double>> ObservationLayout::Unpack(
    std::span<const double> flat) const {
  if (static_cast<int>(flat.size()) != size_) {
    throw ContractViolationError("Unpack: vector has " + std::to_string(flat.size()) +
                                 " entries, layout has " + std::to_string(size_));
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& s : slices_) {
    out[s.name].assign(flat.begin() + s.offset, flat.begin() + s.offset + s.size);
  }
  return out;
}

std::span<const double> ObservationLayout::View(std::span<const double> flat,
                                                const std::string& name) const {
  const auto& s = Find(name);
  return flat.subspan(static_cast<std::size_t>(s.offset), static_cast<std::size_t>(s.size));
}

nlohmann::json ObservationLayout::ToJson() const {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& s : slices_) {
    slices.push_back({{"name", s.name}, {"offset", s.offset}, {"size", s.size}});
  }
  return {{"size", size_}, {"slices", slices}};
}

const ObservationLayout& GraspLayout() {
  static const ObservationLayout layout = [] {
    ObservationLayout l;
    l.Add("joint_angles", 12)
        .Add("joint_torque", 12)
        .Add("object_position", 3)
        .Add("object_linear_velocity", 3)
        .Add("contact_force", 5)
        .Add("contact_center", 15)
        .Add("fingertip_positions", 15)
        .Add("force_command", 1);
    return l;
  }();
  return layout;
}

const ObservationLayout& RotateActorLayout() {
  static const ObservationLayout layout = [] {
    ObservationLayout l;
    l.Add("joint_angles", 12)
        .Add("target_relative_orientation", 6)
        .Add("last_actions", 12)
        .Add("contact_center", 15)
        .Add("contact_force", 5)
        .Add("fingertip_positions", 15);
    return l;
  }();
  return layout;
}

const ObservationLayout& RotateCriticLayout() {
  static const ObservationLayout layout = [] {
    ObservationLayout l = RotateActorLayout();
    l.Add("object_orientation", 6)
        .Add("fingertip_velocities", 30)
        .Add("fingertip_rotations", 30)
        .Add("joint_velocities", 12)
        .Add("object_linear_velocity", 3)
        .Add("object_angular_velocity", 3);
    return l;
  }();
  return layout;
}

const ObservationLayout& ActorLayout(Task task) {
  return task == Task::kGrasp ? GraspLayout() : RotateActorLayout();
}

const ObservationLayout& CriticLayout(Task task) {
  return task == Task::kGrasp ? GraspLayout() : RotateCriticLayout();
}

}  // namespace taxelsim
