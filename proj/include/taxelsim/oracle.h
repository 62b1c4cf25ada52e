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

// Brute-force reference implementations used to cross-check the fast
// geometry and tactile code. They share no code with NearestSurface: the
// surface is described by parametric patches built directly from the
// shape's defining parameters.

#ifndef TAXELSIM_ORACLE_H_
#define TAXELSIM_ORACLE_H_

#include <functional>
#include <span>
#include <vector>

#include "taxelsim/object_shape.h"
#include "taxelsim/tactile.h"

namespace taxelsim {

// A map from [0, 1]^2 onto part of the surface, in the shape frame.
struct SurfacePatch {
  std::function<Vec3(double, double)> point;
  std::function<Vec3(double, double)> normal;  // outward, unit
  bool curved = false;
  // Angle parameters that may leave [0, 1] during refinement.
  bool free_u = false;
  bool free_v = false;
};

std::vector<SurfacePatch> SurfacePatches(const ObjectShape& shape);

struct SurfaceSample {
  Vec3 point;
  Vec3 normal;
};

// Surface samples, shape frame, with angular spacing at most
// `max_angle_step` radians on curved patches. Flat patches contribute
// their corners.
std::vector<SurfaceSample> DenseSurfaceSamples(const ObjectShape& shape, double max_angle_step = 0.02);

// Containment by supporting half-spaces: x (shape frame) is inside when it
// lies strictly behind every sampled tangent plane. Exact for polyhedra;
// for curved surfaces it may accept points up to r * step^2 / 8 outside.
bool OracleContains(std::span<const SurfaceSample> samples, const Vec3& x_local);

// Nearest surface point by coarse grid search over every patch followed by
// shrinking-stencil refinement. Error is far below 1e-6 m for the shapes
// used here. Returns a world-frame query result.
SurfaceQuery OracleNearest(const ObjectShape& shape, const Transform& pose, const Vec3& x);

// SenseFingertip without culling: every taxel is queried and
// force-weighted. Used to check the fast path.
FingertipTactile BruteForceSense(std::span<const Vec3> taxels, const ObjectShape& shape,
                                 const Transform& pose, const ContactMaterial& material,
                                 const Vec3& sentinel);

}  // namespace taxelsim

#endif  // TAXELSIM_ORACLE_H_
