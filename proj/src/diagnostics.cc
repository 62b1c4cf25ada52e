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

#include "taxelsim/diagnostics.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "taxelsim/oracle.h"
#include "taxelsim/random.h"

namespace taxelsim {

namespace {

constexpr double kOracleTolerance = 1e-4;

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Vec3 UniformInBall(RngStream& s, double radius) {
  while (true) {
    const Vec3 v(s.Uniform(-1.0, 1.0), s.Uniform(-1.0, 1.0), s.Uniform(-1.0, 1.0));
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

Transform RandomPose(RngStream& s, double spread) {
  Transform t;
  t.rotation = QuaternionToMatrix(s.UniformQuaternion());
  t.translation = Vec3(s.Uniform(-spread, spread), s.Uniform(-spread, spread), s.Uniform(-spread, spread));
  return t;
}

std::vector<double> RandomJoints(const HandModel& hand, RngStream& s) {
  const auto lo = hand.lower_limits();
  const auto hi = hand.upper_limits();
  std::vector<double> q(lo.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = s.Uniform(lo[j], hi[j]);
  return q;
}

ObjectShape Icosahedron(double radius) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> v;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-1.0, 1.0}) {
      v.emplace_back(0.0, a, b * phi);
      v.emplace_back(a, b * phi, 0.0);
      v.emplace_back(b * phi, 0.0, a);
    }
  }
  const double scale = radius / v[0].norm();
  for (auto& p : v) p *= scale;
  const double edge = 2.0 * scale;
  std::vector<std::vector<int>> faces;
  const int n = static_cast<int>(v.size());
  auto is_edge = [&](int a, int b) { return std::abs((v[a] - v[b]).norm() - edge) < 1e-9 * scale; };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        if (!is_edge(a, b) || !is_edge(b, c) || !is_edge(a, c)) continue;
        const Vec3 normal = (v[b] - v[a]).cross(v[c] - v[a]);
        if (normal.dot(v[a] + v[b] + v[c]) > 0.0) {
          faces.push_back({a, b, c});
        } else {
          faces.push_back({a, c, b});
        }
      }
    }
  }
  return ObjectShape::MakeConvexMesh(v, faces);
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json ValidationReport::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"metrics", c.metrics}});
  }
  return {{"schema_version", 1}, {"passed", passed()}, {"checks", list}};
}

CheckResult CheckTaxelNormals(const HandModel& hand) {
  CheckResult r{"taxel_normals", true, "", nlohmann::json::object()};
  int checked = 0;
  for (std::size_t f = 0; f < hand.fingers.size(); ++f) {
    const auto& finger = hand.fingers[f];
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : finger.taxel_positions) centroid += p;
    if (!finger.taxel_positions.empty()) centroid /= static_cast<double>(finger.taxel_positions.size());
    for (std::size_t j = 0; j < finger.taxel_normals.size(); ++j) {
      const Vec3& n = finger.taxel_normals[j];
      const Vec3& p = finger.taxel_positions[j];
      ++checked;
      std::string problem;
      if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-9) {
        problem = "normal is not unit length";
      } else if (!(n.dot(p - centroid) > 0.0)) {
        problem = "normal points into the pad";
      }
      if (!problem.empty() && r.passed) {
        r.passed = false;
        r.detail = "finger " + std::to_string(f) + " (" + finger.name + ") taxel " + std::to_string(j) +
                   ": " + problem;
        r.metrics["finger"] = f;
        r.metrics["taxel"] = j;
      }
    }
  }
  r.metrics["taxels_checked"] = checked;
  if (r.passed) r.detail = std::to_string(checked) + " taxel normals unit and outward";
  return r;
}

ContactOracleStats CompareContactOracle(const ObjectShape& shape, int cases, std::uint64_t seed,
                                        bool with_nearest) {
  RngStream s(seed, 0);
  const auto samples = DenseSurfaceSamples(shape);
  const auto patches = SurfacePatches(shape);
  const double radius = shape.BoundingRadius();
  ContactOracleStats st;
  for (int i = 0; i < cases; ++i) {
    const Transform pose = RandomPose(s, 0.05);
    Vec3 local;
    if (i % 2 == 0) {
      const auto& patch = patches[static_cast<std::size_t>(s.Uniform(0.0, 1.0) * patches.size()) %
                                  patches.size()];
      const double u = s.Uniform(0.0, 1.0), v = s.Uniform(0.0, 1.0);
      local = patch.point(u, v) + s.Uniform(-0.01, 0.01) * patch.normal(u, v);
    } else {
      local = UniformInBall(s, 1.3 * radius);
    }
    const Vec3 x = pose.Apply(local);
    const SurfaceQuery fast = NearestSurface(shape, pose, x);
    const bool fast_in = DetectContact(x, fast);
    const bool oracle_in = OracleContains(samples, local);
    ++st.cases;
    SurfaceQuery slow;
    const bool need_slow = with_nearest || fast_in != oracle_in;
    if (need_slow) slow = OracleNearest(shape, pose, x);
    if (fast_in == oracle_in) {
      ++st.agreements;
    } else {
      st.max_disagreement_distance = std::max(st.max_disagreement_distance, std::abs(slow.signed_distance));
    }
    if (with_nearest) {
      const double df = (x - fast.point).norm();
      const double ds = (x - slow.point).norm();
      st.max_distance_error = std::max(st.max_distance_error, std::abs(df - ds));
      if (!oracle_in) st.max_point_error = std::max(st.max_point_error, (fast.point - slow.point).norm());
    }
  }
  return st;
}

CheckResult CheckShapeAgainstOracle(const std::string& label, const ObjectShape& shape, int cases,
                                    std::uint64_t seed) {
  const ContactOracleStats st = CompareContactOracle(shape, cases, seed);
  CheckResult r;
  r.name = "contact_oracle/" + label;
  const bool agree = st.agreements * 1000LL >= st.cases * 999LL;
  r.passed = agree && st.max_disagreement_distance <= kOracleTolerance && st.max_point_error < kOracleTolerance &&
             st.max_distance_error < kOracleTolerance;
  r.metrics = {{"cases", st.cases},
               {"agreements", st.agreements},
               {"max_disagreement_distance", st.max_disagreement_distance},
               {"max_point_error", st.max_point_error},
               {"max_distance_error", st.max_distance_error}};
  r.detail = std::to_string(st.agreements) + "/" + std::to_string(st.cases) + " agree, max p_o error " +
             Short(st.max_point_error) + " m";
  return r;
}

CheckResult CheckTactileAgainstBruteForce(const HandModel& hand, const ObjectShape& shape,
                                          const ContactMaterial& material, int cases,
                                          std::uint64_t seed) {
  RngStream s(seed, 1);
  CheckResult r;
  r.name = "tactile_bruteforce/" + shape.type_name();
  double max_force = 0.0, max_center = 0.0;
  int count_mismatch = 0, contacts = 0;
  for (int i = 0; i < cases; ++i) {
    const auto q = RandomJoints(hand, s);
    const TaxelFrameBatch frames = ForwardKinematics(hand, q);
    const int f = static_cast<int>(s.Uniform(0.0, 1.0) * hand.fingers.size()) %
                  static_cast<int>(hand.fingers.size());
    const auto taxels = frames.FingerPositions(f);
    const auto normals = frames.FingerNormals(f);
    const std::size_t j = static_cast<std::size_t>(s.Uniform(0.0, 1.0) * taxels.size()) % taxels.size();
    Transform pose;
    pose.rotation = QuaternionToMatrix(s.UniformQuaternion());
    pose.translation = taxels[j] + normals[j] * s.Uniform(0.0, shape.BoundingRadius());
    for (int k = 0; k < static_cast<int>(hand.fingers.size()); ++k) {
      const auto fast = SenseFingertip(frames.FingerPositions(k), shape, pose, material,
                                       frames.fingertip_poses[k].translation);
      const auto slow = BruteForceSense(frames.FingerPositions(k), shape, pose, material,
                                        frames.fingertip_poses[k].translation);
      if (fast.active_count != slow.active_count) ++count_mismatch;
      if (slow.active_count > 0) ++contacts;
      max_force = std::max(max_force, std::abs(fast.total_force - slow.total_force));
      max_center = std::max(max_center, (fast.contact_center - slow.contact_center).norm());
    }
  }
  r.passed = count_mismatch == 0 && max_force <= 1e-12 && max_center <= 1e-12;
  r.metrics = {{"cases", cases},
               {"fingertips_in_contact", contacts},
               {"active_count_mismatches", count_mismatch},
               {"max_force_error", max_force},
               {"max_center_error", max_center}};
  r.detail = std::to_string(contacts) + " fingertip contacts, max center error " + Short(max_center);
  return r;
}

std::vector<std::pair<std::string, ObjectShape>> ReferenceShapes() {
  return {{"sphere", ObjectShape::MakeSphere(0.03)},
          {"box", ObjectShape::MakeBox(Vec3(0.02, 0.03, 0.025))},
          {"cylinder", ObjectShape::MakeCylinder(0.025, 0.04)},
          {"convex_mesh", Icosahedron(0.03)}};
}

ValidationReport RunValidation(const HandModel& hand,
                               const std::vector<std::pair<std::string, ObjectShape>>& shapes,
                               const ContactMaterial& material, int cases, std::uint64_t seed) {
  ValidationReport report;
  report.checks.push_back(CheckTaxelNormals(hand));
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    report.checks.push_back(CheckShapeAgainstOracle(shapes[i].first, shapes[i].second, cases, seed + i));
    CheckResult t = CheckTactileAgainstBruteForce(hand, shapes[i].second, material, std::max(1, cases / 10), seed + i);
    t.name = "tactile_bruteforce/" + shapes[i].first;
    report.checks.push_back(std::move(t));
  }
  return report;
}

BenchResult BenchTactile(const std::string& label, const ObjectShape& shape, const HandModel& hand,
                         int n_envs, int n_steps, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  BenchResult b;
  b.shape = label;
  std::vector<SurfaceQuery> out(static_cast<std::size_t>(hand.num_taxels()));
  Clock::duration elapsed{};
  for (int e = 0; e < n_envs; ++e) {
    RngStream s(seed, static_cast<std::uint64_t>(e));
    Transform pose;
    pose.rotation = QuaternionToMatrix(s.UniformQuaternion());
    for (int t = 0; t < n_steps; ++t) {
      const TaxelFrameBatch frames = ForwardKinematics(hand, RandomJoints(hand, s));
      Vec3 center = Vec3::Zero();
      for (const auto& tip : frames.fingertip_poses) center += tip.translation;
      pose.translation = center / static_cast<double>(frames.fingertip_poses.size());

      const auto start = Clock::now();
      BatchNearestSurface(shape, pose, frames.positions, out);
      long long active = 0;
      for (std::size_t i = 0; i < out.size(); ++i) active += DetectContact(frames.positions[i], out[i]) ? 1 : 0;
      elapsed += Clock::now() - start;

      b.active_taxels += active;
      b.queries += static_cast<long long>(out.size());
    }
  }
  b.seconds = std::chrono::duration<double>(elapsed).count();
  b.queries_per_second = b.seconds > 0.0 ? static_cast<double>(b.queries) / b.seconds : 0.0;
  return b;
}

}  // namespace taxelsim
