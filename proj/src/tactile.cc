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

#include "taxelsim/tactile.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

void ContactMaterial::Validate() const {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) throw ConfigError("material: stiffness must be positive");
  if (!(pad_thickness > 0.0)) throw ConfigError("material: pad_thickness must be positive");
  if (!(taxel_area > 0.0)) throw ConfigError("material: taxel_area must be positive");
  if (!(min_depth >= 0.0)) throw ConfigError("material: min_depth must be non-negative");
  for (std::size_t i = 0; i < stress_strain.size(); ++i) {
    const auto [strain, stress] = stress_strain[i];
    if (strain < 0.0 || stress < 0.0) throw ConfigError("material: stress_strain entries must be non-negative");
    if (strain == 0.0 && stress != 0.0) throw ConfigError("material: stress at zero strain must be 0");
    if (i > 0 && !(strain > stress_strain[i - 1].first && stress > stress_strain[i - 1].second)) {
      throw ConfigError("material: stress_strain[" + std::to_string(i) +
                        "] is not strictly increasing in both coordinates");
    }
  }
}

bool DetectContact(const Vec3& taxel_position, const SurfaceQuery& surface) {
  return (taxel_position - surface.point).dot(surface.normal) < 0.0;
}

namespace {

// Piecewise-linear through (0, 0) and the table, extended past the last
// point with the last segment's slope.
double InterpolateStress(const std::vector<std::pair<double, double>>& table, double strain) {
  double s0 = 0.0, t0 = 0.0;
  std::size_t i = 0;
  if (table.front().first == 0.0) i = 1;
  for (; i < table.size(); ++i) {
    const auto [s1, t1] = table[i];
    if (strain <= s1 || i + 1 == table.size()) {
      return t0 + (t1 - t0) * (strain - s0) / (s1 - s0);
    }
    s0 = s1;
    t0 = t1;
  }
  return t0;  // single (0, 0) entry
}

}  // namespace

double TaxelForce(double depth, const ContactMaterial& material) {
  if (depth < 0.0 || std::isnan(depth)) {
    throw ContractViolationError("TaxelForce: depth must be non-negative");
  }
  if (!material.tabulated()) return material.stiffness * depth;
  if (depth == 0.0) return 0.0;
  return InterpolateStress(material.stress_strain, depth / material.pad_thickness) *
         material.taxel_area;
}

Vec3 WeightedCenter(std::span<const Vec3> positions, std::span<const double> weights) {
  Vec3 num = Vec3::Zero();
  double den = 0.0;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    num += weights[j] * positions[j];
    den += weights[j];
  }
  return num / den;
}

FingertipTactile SenseFingertip(std::span<const Vec3> taxels, const ObjectShape& shape,
                                const Transform& pose, const ContactMaterial& material,
                                const Vec3& sentinel) {
  FingertipTactile out;
  out.contact_center = sentinel;
  out.readings.resize(taxels.size());
  if (taxels.empty()) return out;

  // Signed distance is 1-Lipschitz, so if the sphere bounding the pad is
  // entirely outside the object no taxel can be active.
  Vec3 center = Vec3::Zero();
  for (const Vec3& p : taxels) center += p;
  center /= static_cast<double>(taxels.size());
  double radius = 0.0;
  for (std::size_t j = 0; j < taxels.size(); ++j) {
    out.readings[j].position = taxels[j];
    radius = std::max(radius, (taxels[j] - center).norm());
  }
  if (NearestSurface(shape, pose, center).signed_distance > radius) return out;

  std::vector<SurfaceQuery> surfaces = BatchNearestSurface(shape, pose, taxels);
  std::vector<Vec3> active_positions;
  std::vector<double> depths;
  std::vector<double> forces;
  for (std::size_t j = 0; j < taxels.size(); ++j) {
    TaxelReading& r = out.readings[j];
    if (!DetectContact(taxels[j], surfaces[j])) continue;
    const double depth = (taxels[j] - surfaces[j].point).norm();
    if (depth <= material.min_depth) continue;
    r.active = true;
    r.depth = depth;
    r.force = TaxelForce(depth, material);
    r.surface_point = surfaces[j].point;
    r.surface_normal = surfaces[j].normal;
    active_positions.push_back(taxels[j]);
    depths.push_back(depth);
    forces.push_back(r.force);
    out.total_force += r.force;
    ++out.active_count;
  }
  if (out.active_count > 0 && out.total_force > 0.0) {
    out.contact_center = material.tabulated() ? WeightedCenter(active_positions, forces)
                                              : WeightedCenter(active_positions, depths);
  }
  return out;
}

std::vector<FingertipTactile> SenseHand(const TaxelFrameBatch& frames, const ObjectShape& shape,
                                        const Transform& pose, const ContactMaterial& material) {
  std::vector<FingertipTactile> out;
  const int fingers = static_cast<int>(frames.fingertip_poses.size());
  out.reserve(static_cast<std::size_t>(fingers));
  for (int f = 0; f < fingers; ++f) {
    out.push_back(SenseFingertip(frames.FingerPositions(f), shape, pose, material,
                                 frames.fingertip_poses[f].translation));
  }
  return out;
}

ContactMaterial ParseContactMaterial(const nlohmann::json& j, const std::string& path) {
  ContactMaterial m;
  if (!j.is_object()) ju::Fail(path, "expected object");
  m.stiffness = ju::NumberOr(j, "stiffness", m.stiffness, path);
  m.pad_thickness = ju::NumberOr(j, "pad_thickness", m.pad_thickness, path);
  m.taxel_area = ju::NumberOr(j, "taxel_area", m.taxel_area, path);
  m.min_depth = ju::NumberOr(j, "min_depth", m.min_depth, path);
  if (j.contains("stress_strain")) {
    const std::string tp = ju::Child(path, "stress_strain");
    const auto& table = j["stress_strain"];
    if (!table.is_array()) ju::Fail(tp, "expected array of [strain, stress] pairs");
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto pair = ju::ReadNumbers(table[i], ju::Index(tp, i));
      if (pair.size() != 2) ju::Fail(ju::Index(tp, i), "expected [strain, stress]");
      m.stress_strain.emplace_back(pair[0], pair[1]);
    }
  }
  try {
    m.Validate();
  } catch (const ConfigError& e) {
    ju::Fail(path, e.what());
  }
  return m;
}

nlohmann::json ContactMaterialToJson(const ContactMaterial& material) {
  ju::Json j = {{"stiffness", material.stiffness},
                {"pad_thickness", material.pad_thickness},
                {"taxel_area", material.taxel_area},
                {"min_depth", material.min_depth}};
  if (material.tabulated()) {
    ju::Json table = ju::Json::array();
    for (const auto& [s, t] : material.stress_strain) table.push_back({s, t});
    j["stress_strain"] = table;
  }
  return j;
}

}  // namespace taxelsim
