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

// Self-checks against the brute-force oracles, and the tactile query
// benchmark.

#ifndef TAXELSIM_DIAGNOSTICS_H_
#define TAXELSIM_DIAGNOSTICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/hand_model.h"
#include "taxelsim/object_shape.h"
#include "taxelsim/tactile.h"

namespace taxelsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json metrics = nlohmann::json::object();
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json ToJson() const;
};

// Unit length to 1e-9 and outward, n . (p - pad centroid) > 0, for every
// taxel. A failure names the first offending finger and taxel index.
CheckResult CheckTaxelNormals(const HandModel& hand);

struct ContactOracleStats {
  int cases = 0;
  int agreements = 0;
  double max_disagreement_distance = 0.0;  // |signed distance| of disagreeing cases
  double max_point_error = 0.0;            // exterior queries, |p_fast - p_oracle|
  double max_distance_error = 0.0;         // all queries, | |x - p_fast| - |x - p_oracle| |
};

// Random (pose, point) pairs around `shape`: half near the surface, half
// in the bounding ball. Compares the activation rule on NearestSurface
// with OracleContains and the nearest point with OracleNearest.
ContactOracleStats CompareContactOracle(const ObjectShape& shape, int cases, std::uint64_t seed,
                                        bool with_nearest = true);

// Passes when at least 99.9% agree, every disagreement is within 1e-4 m
// of the surface, and nearest-point errors are below 1e-4 m.
CheckResult CheckShapeAgainstOracle(const std::string& label, const ObjectShape& shape, int cases,
                                    std::uint64_t seed);

// SenseFingertip against BruteForceSense on random hand poses with the
// object placed among the fingertips.
CheckResult CheckTactileAgainstBruteForce(const HandModel& hand, const ObjectShape& shape,
                                          const ContactMaterial& material, int cases,
                                          std::uint64_t seed);

// Sphere, box, cylinder and a convex icosahedron, all a few centimetres
// across.
std::vector<std::pair<std::string, ObjectShape>> ReferenceShapes();

ValidationReport RunValidation(const HandModel& hand,
                               const std::vector<std::pair<std::string, ObjectShape>>& shapes,
                               const ContactMaterial& material, int cases, std::uint64_t seed);

struct BenchResult {
  std::string shape;
  long long queries = 0;
  double seconds = 0.0;
  double queries_per_second = 0.0;
  long long active_taxels = 0;
};

// n_envs hands with random joint configurations each step, object among
// the fingertips; times only the 600 nearest-surface queries per env and
// step, on the calling thread.
BenchResult BenchTactile(const std::string& label, const ObjectShape& shape, const HandModel& hand,
                         int n_envs, int n_steps, std::uint64_t seed);

}  // namespace taxelsim

#endif  // TAXELSIM_DIAGNOSTICS_H_
