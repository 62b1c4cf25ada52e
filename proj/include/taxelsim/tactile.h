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

// Virtual taxel contact model.
//
// A taxel at p is in contact when it has penetrated the object: with p_o the
// nearest object surface point and n_o the outward normal there,
//
//   contact  <=>  (p - p_o) . n_o < 0.
//
// Its depth is |p - p_o| and its normal force is k * depth (or a tabulated
// stress-strain law). Each fingertip reduces to T = (F, mu): the summed force
// and the force-weighted mean position of its active taxels. With the linear
// law k cancels from mu, so mu is computed from depths alone.

#ifndef TAXELSIM_TACTILE_H_
#define TAXELSIM_TACTILE_H_

#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "taxelsim/hand_model.h"
#include "taxelsim/object_shape.h"
#include "taxelsim/rotation.h"

namespace taxelsim {

struct ContactMaterial {
  double stiffness = 100.0;  // force per meter of penetration
  // Optional (strain, stress) curve; when non-empty it replaces the linear
  // law: f = stress(depth / pad_thickness) * taxel_area.
  std::vector<std::pair<double, double>> stress_strain;
  double pad_thickness = 0.002;             // m
  double taxel_area = 5.235987755982988e-6; // m^2, hemisphere of 10 mm / 120
  // Taxels shallower than this stay inactive. 0 keeps the bare sign rule.
  double min_depth = 0.0;

  bool tabulated() const { return !stress_strain.empty(); }
  // Throws ConfigError when k <= 0, the table is not strictly increasing in
  // both coordinates, or pad/area are non-positive.
  void Validate() const;
};

struct TaxelReading {
  bool active = false;
  double depth = 0.0;  // m
  double force = 0.0;  // sensor units
  Vec3 position = Vec3::Zero();
  // Nearest object point and outward normal; meaningful when active.
  Vec3 surface_point = Vec3::Zero();
  Vec3 surface_normal = Vec3::UnitZ();
};

struct FingertipTactile {
  double total_force = 0.0;
  Vec3 contact_center = Vec3::Zero();
  int active_count = 0;
  std::vector<TaxelReading> readings;
};

// (p - p_o) . n_o < 0, strictly.
bool DetectContact(const Vec3& taxel_position, const SurfaceQuery& surface);

// Throws ContractViolationError for negative depth.
double TaxelForce(double depth, const ContactMaterial& material);

// sum(w_j p_j) / sum(w_j). Callers guarantee a positive weight sum.
Vec3 WeightedCenter(std::span<const Vec3> positions, std::span<const double> weights);

// `sentinel` is reported as the contact center when nothing is touching;
// SenseHand passes the fingertip frame origin.
FingertipTactile SenseFingertip(std::span<const Vec3> taxels, const ObjectShape& shape,
                                const Transform& pose, const ContactMaterial& material,
                                const Vec3& sentinel);

std::vector<FingertipTactile> SenseHand(const TaxelFrameBatch& frames, const ObjectShape& shape,
                                        const Transform& pose, const ContactMaterial& material);

// {"stiffness": k, "stress_strain": [[strain, stress], ...],
//  "pad_thickness": m, "taxel_area": m2, "min_depth": m}
ContactMaterial ParseContactMaterial(const nlohmann::json& j, const std::string& path);
nlohmann::json ContactMaterialToJson(const ContactMaterial& material);

}  // namespace taxelsim

#endif  // TAXELSIM_TACTILE_H_
