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

#include "taxelsim/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace taxelsim {

namespace {

constexpr double kPi = std::numbers::pi;

SurfacePatch Flat(const Vec3& origin, const Vec3& du, const Vec3& dv) {
  const Vec3 n = du.cross(dv).normalized();
  return {[=](double u, double v) { return Vec3(origin + u * du + v * dv); },
          [=](double, double) { return n; }, false};
}

// Folds the unit square onto the triangle (a, b, c).
SurfacePatch Triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  return {[=](double u, double v) {
            if (u + v > 1.0) {
              u = 1.0 - u;
              v = 1.0 - v;
            }
            return Vec3(a + u * (b - a) + v * (c - a));
          },
          [=](double, double) { return n; }, false};
}

struct Candidate {
  double dist2 = std::numeric_limits<double>::infinity();
  std::size_t patch = 0;
  double u = 0.0;
  double v = 0.0;
};

}  // namespace

std::vector<SurfacePatch> SurfacePatches(const ObjectShape& shape) {
  std::vector<SurfacePatch> patches;
  const auto& var = shape.variant();
  if (const auto* s = std::get_if<Sphere>(&var)) {
    const double r = s->radius;
    auto dir = [](double u, double v) {
      const double th = kPi * u, ph = 2.0 * kPi * v;
      return Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    };
    patches.push_back({[=](double u, double v) { return Vec3(r * dir(u, v)); }, dir, true, true, true});
  } else if (const auto* b = std::get_if<Box>(&var)) {
    const Vec3 h = b->half_extents;
    for (int axis = 0; axis < 3; ++axis) {
      const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      for (double sign : {-1.0, 1.0}) {
        Vec3 origin = Vec3::Zero();
        origin[axis] = sign * h[axis];
        origin[a1] = -h[a1];
        origin[a2] = -h[a2];
        Vec3 du = Vec3::Zero(), dv = Vec3::Zero();
        du[a1] = 2.0 * h[a1];
        dv[a2] = 2.0 * h[a2];
        // Orient so du x dv points outward.
        patches.push_back(sign > 0 ? Flat(origin, du, dv) : Flat(origin, dv, du));
      }
    }
  } else if (const auto* c = std::get_if<Cylinder>(&var)) {
    const double r = c->radius, hh = c->half_height;
    patches.push_back({[=](double u, double v) {
                         const double ph = 2.0 * kPi * u;
                         return Vec3(r * std::cos(ph), r * std::sin(ph), -hh + 2.0 * hh * v);
                       },
                       [=](double u, double) {
                         const double ph = 2.0 * kPi * u;
                         return Vec3(std::cos(ph), std::sin(ph), 0.0);
                       },
                       true, true, false});
    for (double sign : {-1.0, 1.0}) {
      patches.push_back({[=](double u, double v) {
                           const double ph = 2.0 * kPi * v;
                           return Vec3(r * u * std::cos(ph), r * u * std::sin(ph), sign * hh);
                         },
                         [=](double, double) { return Vec3(0.0, 0.0, sign); }, false, false, true});
    }
  } else if (const auto* m = std::get_if<ConvexMesh>(&var)) {
    for (const auto& t : m->triangles) {
      patches.push_back(Triangle(m->vertices[t[0]], m->vertices[t[1]], m->vertices[t[2]]));
    }
  }
  return patches;
}

std::vector<SurfaceSample> DenseSurfaceSamples(const ObjectShape& shape, double max_angle_step) {
  std::vector<SurfaceSample> samples;
  const auto patches = SurfacePatches(shape);
  const int curved_n = static_cast<int>(std::ceil(2.0 * kPi / max_angle_step));
  for (const auto& p : patches) {
    const int n = p.curved ? curved_n : 1;
    for (int i = 0; i <= n; ++i) {
      for (int k = 0; k <= n; ++k) {
        const double u = static_cast<double>(i) / n, v = static_cast<double>(k) / n;
        samples.push_back({p.point(u, v), p.normal(u, v)});
      }
    }
  }
  return samples;
}

bool OracleContains(std::span<const SurfaceSample> samples, const Vec3& x) {
  for (const auto& s : samples) {
    if ((x - s.point).dot(s.normal) >= 0.0) return false;
  }
  return true;
}

SurfaceQuery OracleNearest(const ObjectShape& shape, const Transform& pose, const Vec3& x_world) {
  const Vec3 x = pose.rotation.transpose() * (x_world - pose.translation);
  const auto patches = SurfacePatches(shape);
  constexpr int kGrid = 48;
  constexpr int kKeep = 6;
  std::vector<Candidate> best;
  for (std::size_t pi = 0; pi < patches.size(); ++pi) {
    Candidate local;
    local.patch = pi;
    for (int i = 0; i <= kGrid; ++i) {
      for (int k = 0; k <= kGrid; ++k) {
        const double u = static_cast<double>(i) / kGrid, v = static_cast<double>(k) / kGrid;
        const double d2 = (patches[pi].point(u, v) - x).squaredNorm();
        if (d2 < local.dist2) local = {d2, pi, u, v};
      }
    }
    best.push_back(local);
  }
  std::sort(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) { return a.dist2 < b.dist2; });
  if (best.size() > kKeep) best.resize(kKeep);

  Candidate winner;
  for (Candidate c : best) {
    const SurfacePatch& p = patches[c.patch];
    double step = 1.0 / kGrid;
    for (int iter = 0; iter < 400 && step > 1e-12; ++iter) {
      Candidate improved = c;
      for (int i = -2; i <= 2; ++i) {
        for (int k = -2; k <= 2; ++k) {
          const double u = p.free_u ? c.u + i * step : std::clamp(c.u + i * step, 0.0, 1.0);
          const double v = p.free_v ? c.v + k * step : std::clamp(c.v + k * step, 0.0, 1.0);
          const double d2 = (p.point(u, v) - x).squaredNorm();
          if (d2 < improved.dist2) improved = {d2, c.patch, u, v};
        }
      }
      if (improved.u == c.u && improved.v == c.v) step *= 0.5;
      c = improved;
    }
    if (c.dist2 < winner.dist2) winner = c;
  }

  const SurfacePatch& p = patches[winner.patch];
  const Vec3 point = p.point(winner.u, winner.v);
  const Vec3 normal = p.normal(winner.u, winner.v);
  SurfaceQuery q;
  q.point = pose.Apply(point);
  q.normal = pose.ApplyDirection(normal);
  const double dist = std::sqrt(winner.dist2);
  q.signed_distance = (x - point).dot(normal) < 0.0 ? -dist : dist;
  return q;
}

FingertipTactile BruteForceSense(std::span<const Vec3> taxels, const ObjectShape& shape,
                                 const Transform& pose, const ContactMaterial& material,
                                 const Vec3& sentinel) {
  FingertipTactile out;
  out.contact_center = sentinel;
  out.readings.resize(taxels.size());
  Vec3 weighted = Vec3::Zero();
  for (std::size_t j = 0; j < taxels.size(); ++j) {
    TaxelReading& r = out.readings[j];
    r.position = taxels[j];
    const SurfaceQuery s = NearestSurface(shape, pose, taxels[j]);
    if (!((taxels[j] - s.point).dot(s.normal) < 0.0)) continue;
    const double depth = (taxels[j] - s.point).norm();
    if (depth <= material.min_depth) continue;
    r.active = true;
    r.depth = depth;
    r.force = TaxelForce(depth, material);
    r.surface_point = s.point;
    r.surface_normal = s.normal;
    out.total_force += r.force;
    weighted += r.force * taxels[j];
    ++out.active_count;
  }
  if (out.active_count > 0 && out.total_force > 0.0) out.contact_center = weighted / out.total_force;
  return out;
}

}  // namespace taxelsim
