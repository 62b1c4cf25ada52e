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

// Object shapes and the closest-surface-point query that drives taxel
// contact detection.
//
// Conventions shared by every shape:
//   - the shape frame is centered on the center of mass,
//   - signed distance is negative inside,
//   - the reported normal always points out of the object, including for
//     interior queries,
//   - ties (equidistant faces) are broken by axis priority x, then y, then z;
//     on a cylinder the lateral surface wins over the caps.

#ifndef TAXELSIM_OBJECT_SHAPE_H_
#define TAXELSIM_OBJECT_SHAPE_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "taxelsim/rotation.h"

namespace taxelsim {

struct Sphere {
  double radius = 0.0;
};

struct Box {
  Vec3 half_extents = Vec3::Zero();
};

// Axis along local z.
struct Cylinder {
  double radius = 0.0;
  double half_height = 0.0;
};

// Closed, convex, outward-wound triangle mesh. Construct through
// MakeConvexMesh, which validates and recenters on the volume centroid.
struct ConvexMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;     // per triangle, unit, outward
  std::vector<double> offsets;   // plane: normals[i].dot(x) == offsets[i]
};

struct SurfaceQuery {
  Vec3 point = Vec3::Zero();     // nearest surface point p_o
  Vec3 normal = Vec3::UnitZ();   // outward unit normal n_o
  double signed_distance = 0.0;  // negative inside
};

class ObjectShape {
 public:
  using Variant = std::variant<Sphere, Box, Cylinder, ConvexMesh>;

  ObjectShape() = default;
  // Throws InvalidShapeError for non-positive sizes.
  explicit ObjectShape(Variant v);

  static ObjectShape MakeSphere(double radius);
  static ObjectShape MakeBox(const Vec3& half_extents);
  static ObjectShape MakeCylinder(double radius, double half_height);
  // Polygonal faces are fan-triangulated. Throws InvalidShapeError for open,
  // non-convex, inward-wound, or degenerate meshes.
  static ObjectShape MakeConvexMesh(std::vector<Vec3> vertices,
                                    const std::vector<std::vector<int>>& faces);

  const Variant& variant() const { return shape_; }
  std::string type_name() const;

  // Uniformly scaled copy.
  ObjectShape Scaled(double factor) const;
  double Volume() const;
  // Inertia tensor per unit mass about the center of mass, shape frame.
  Mat3 UnitInertia() const;
  // Radius of a center-of-mass-centered sphere enclosing the shape.
  double BoundingRadius() const;

  // Query in the shape frame.
  SurfaceQuery NearestLocal(const Vec3& x) const;

 private:
  Variant shape_ = Sphere{1.0};
};

// Closest surface point with outward normal for a world-frame query.
SurfaceQuery NearestSurface(const ObjectShape& shape, const Transform& pose,
                            const Vec3& query);

// Elementwise NearestSurface; `out` must have the same size as `queries`.
void BatchNearestSurface(const ObjectShape& shape, const Transform& pose,
                         std::span<const Vec3> queries, std::span<SurfaceQuery> out);
std::vector<SurfaceQuery> BatchNearestSurface(const ObjectShape& shape, const Transform& pose,
                                              std::span<const Vec3> queries);

// OFF reader ("OFF" header, counts line, vertices, faces). Comments
// starting with '#' are ignored.
ObjectShape ReadOffMesh(std::istream& in, const std::string& source = "<stream>");
ObjectShape LoadOffMesh(const std::filesystem::path& file);

// {"type": "sphere", "radius": r} | {"type": "box", "half_extents": [..]} |
// {"type": "cylinder", "radius": r, "half_height": h} |
// {"type": "convex_mesh", "off": "file.off"} |
// {"type": "convex_mesh", "vertices": [[..]], "faces": [[..]]}
// Relative OFF paths resolve against `base_dir`.
ObjectShape ParseObjectShape(const nlohmann::json& j, const std::string& path,
                             const std::filesystem::path& base_dir);
nlohmann::json ObjectShapeToJson(const ObjectShape& shape);

}  // namespace taxelsim

#endif  // TAXELSIM_OBJECT_SHAPE_H_
