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

// Flat observation vectors and the named slices that make them up.
//
// Grasp (actor and critic, 66):
//   joint_angles 12 | joint_torque 12 | object_position 3 |
//   object_linear_velocity 3 | contact_force 5 | contact_center 15 |
//   fingertip_positions 15 | force_command 1
//
// Rotate actor (65):
//   joint_angles 12 | target_relative_orientation 6 | last_actions 12 |
//   contact_center 15 | contact_force 5 | fingertip_positions 15
//
// Rotate critic (149): the actor slices followed by
//   object_orientation 6 | fingertip_velocities 30 | fingertip_rotations 30 |
//   joint_velocities 12 | object_linear_velocity 3 | object_angular_velocity 3

#ifndef TAXELSIM_OBSERVATION_H_
#define TAXELSIM_OBSERVATION_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/env_config.h"

namespace taxelsim {

struct ObservationSlice {
  std::string name;
  int offset = 0;
  int size = 0;
};

class ObservationLayout {
 public:
  ObservationLayout() = default;

  // Appends a slice at the current end.
  ObservationLayout& Add(const std::string& name, int size);

  int size() const { return size_; }
  const std::vector<ObservationSlice>& slices() const { return slices_; }
  // Throws ContractViolationError for unknown names.
  const ObservationSlice& Find(const std::string& name) const;

  // Concatenates `values` in layout order. Every slice must be present with
  // its declared size.
  std::vector<double> Pack(const std::map<std::string, std::vector<double>>& values) const;
  std::map<std::string, std::vector<double>> Unpack(std::span<const double> flat) const;
  std::span<const double> View(std::span<const double> flat, const std::string& name) const;

  nlohmann::json ToJson() const;

 private:
  std::vector<ObservationSlice> slices_;
  int size_ = 0;
};

const ObservationLayout& GraspLayout();
const ObservationLayout& RotateActorLayout();
const ObservationLayout& RotateCriticLayout();

const ObservationLayout& ActorLayout(Task task);
const ObservationLayout& CriticLayout(Task task);

struct Observation {
  std::vector<double> actor;
  std::vector<double> critic;
};

}  // namespace taxelsim

#endif  // TAXELSIM_OBSERVATION_H_
