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

#include "taxelsim/object_shape.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool PositiveFinite(double v) { return std::isfinite(v) && v > 0.0; }

SurfaceQuery SphereNearest(const Sphere& s, const Vec3& x) {
  const double r = x.norm();
  const Vec3 n = r > 0.0 ? Vec3(x / r) : Vec3(Vec3::UnitX());
  return {s.radius * n, n, r - s.radius};
}

SurfaceQuery BoxNearest(const Box& b, const Vec3& x) {
  const Vec3& h = b.half_extents;
  const bool inside = std::abs(x.x()) <= h.x() && std::abs(x.y()) <= h.y() &&
                      std::abs(x.z()) <= h.z();
  SurfaceQuery out;
  if (inside) {
    int axis = 0;
    double best = h.x() - std::abs(x.x());
    for (int i = 1; i < 3; ++i) {
      const double d = h[i] - std::abs(x[i]);
      if (d < best) {
        best = d;
        axis = i;
      }
    }
    const double sign = x[axis] >= 0.0 ? 1.0 : -1.0;
    out.point = x;
    out.point[axis] = sign * h[axis];
    out.normal = Vec3::Zero();
    out.normal[axis] = sign;
    out.signed_distance = -best;
    return out;
  }
  out.point = x.cwiseMax(-h).cwiseMin(h);
  int axis = -1;
  double best_excess = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double excess = std::abs(x[i]) - h[i];
    if (excess > 0.0 && (axis < 0 || excess > best_excess)) {
      axis = i;
      best_excess = excess;
    }
  }
  out.normal = Vec3::Zero();
  out.normal[axis] = x[axis] >= 0.0 ? 1.0 : -1.0;
  out.signed_distance = (x - out.point).norm();
  return out;
}

SurfaceQuery CylinderNearest(const Cylinder& c, const Vec3& x) {
  const double rho = std::hypot(x.x(), x.y());
  const double ux = rho > 0.0 ? x.x() / rho : 1.0;
  const double uy = rho > 0.0 ? x.y() / rho : 0.0;
  const double zsign = x.z() >= 0.0 ? 1.0 : -1.0;
  const double abs_z = std::abs(x.z());
  const Vec3 side_normal(ux, uy, 0.0);
  const Vec3 cap_normal(0.0, 0.0, zsign);

  SurfaceQuery out;
  if (rho <= c.radius && abs_z <= c.half_height) {
    const double d_side = c.radius - rho;
    const double d_cap = c.half_height - abs_z;
    if (d_side <= d_cap) {
      out.point = Vec3(c.radius * ux, c.radius * uy, x.z());
      out.normal = side_normal;
      out.signed_distance = -d_side;
    } else {
      out.point = Vec3(x.x(), x.y(), zsign * c.half_height);
      out.normal = cap_normal;
      out.signed_distance = -d_cap;
    }
    return out;
  }
  const double side_excess = rho - c.radius;
  const double cap_excess = abs_z - c.half_height;
  const double pr = std::min(rho, c.radius);
  out.point = Vec3(pr * ux, pr * uy, std::clamp(x.z(), -c.half_height, c.half_height));
  out.normal = side_excess >= cap_excess ? side_normal : cap_normal;
  out.signed_distance = (x - out.point).norm();
  return out;
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision
// Detection, 5.1.5).
Vec3 ClosestOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

SurfaceQuery MeshNearest(const ConvexMesh& m, const Vec3& x) {
  std::size_t best_face = 0;
  double best_plane = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const double d = m.normals[f].dot(x) - m.offsets[f];
    if (d > best_plane) {
      best_plane = d;
      best_face = f;
    }
  }
  SurfaceQuery out;
  if (best_plane <= 0.0) {
    // Inside: the closest boundary point lies on the nearest facet plane.
    out.normal = m.normals[best_face];
    out.point = x - best_plane * out.normal;
    out.signed_distance = best_plane;
    return out;
  }
  double best_sq = std::numeric_limits<double>::infinity();
  for (const auto& tri : m.triangles) {
    const Vec3 p = ClosestOnTriangle(x, m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
    const double sq = (x - p).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      out.point = p;
    }
  }
  const double dist = std::sqrt(best_sq);
  out.signed_distance = dist;
  out.normal = dist > 1e-12 ? Vec3((x - out.point) / dist) : m.normals[best_face];
  return out;
}

void ValidateVariant(const ObjectShape::Variant& v) {
  std::visit(Overloaded{
                 [](const Sphere& s) {
                   if (!PositiveFinite(s.radius)) throw InvalidShapeError("sphere: radius must be positive");
                 },
                 [](const Box& b) {
                   for (int i = 0; i < 3; ++i) {
                     if (!PositiveFinite(b.half_extents[i]))
                       throw InvalidShapeError("box: half extents must be positive");
                   }
                 },
                 [](const Cylinder& c) {
                   if (!PositiveFinite(c.radius) || !PositiveFinite(c.half_height))
                     throw InvalidShapeError("cylinder: radius and half height must be positive");
                 },
                 [](const ConvexMesh& m) {
                   if (m.triangles.size() < 4 || m.normals.size() != m.triangles.size() ||
                       m.offsets.size() != m.triangles.size())
                     throw InvalidShapeError("convex mesh: build it with MakeConvexMesh");
                 },
             },
             v);
}

// Volume, first moment and second moment (covariance) of the solid bounded
// by the mesh, accumulated over tetrahedra (0, a, b, c).
struct MeshMoments {
  double volume = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
};

MeshMoments ComputeMoments(const std::vector<Vec3>& vertices,
                           const std::vector<std::array<int, 3>>& triangles) {
  Mat3 canonical;
  canonical << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  canonical /= 120.0;
  MeshMoments m;
  for (const auto& t : triangles) {
    Mat3 a;
    a.col(0) = vertices[t[0]];
    a.col(1) = vertices[t[1]];
    a.col(2) = vertices[t[2]];
    const double det = a.determinant();
    m.volume += det / 6.0;
    m.first += det / 6.0 * (a.col(0) + a.col(1) + a.col(2)) / 4.0;
    m.covariance += det * a * canonical * a.transpose();
  }
  return m;
}

}  // namespace

ObjectShape::ObjectShape(Variant v) : shape_(std::move(v)) { ValidateVariant(shape_); }

ObjectShape ObjectShape::MakeSphere(double radius) { return ObjectShape(Sphere{radius}); }

ObjectShape ObjectShape::MakeBox(const Vec3& half_extents) { return ObjectShape(Box{half_extents}); }

ObjectShape ObjectShape::MakeCylinder(double radius, double half_height) {
  return ObjectShape(Cylinder{radius, half_height});
}

ObjectShape ObjectShape::MakeConvexMesh(std::vector<Vec3> vertices,
                                        const std::vector<std::vector<int>>& faces) {
  if (vertices.size() < 4) throw InvalidShapeError("convex mesh: need at least 4 vertices");
  for (const Vec3& v : vertices) {
    if (!v.allFinite()) throw InvalidShapeError("convex mesh: non-finite vertex");
  }
  std::vector<std::array<int, 3>> triangles;
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& face = faces[f];
    if (face.size() < 3) throw InvalidShapeError("convex mesh: face " + std::to_string(f) + " has fewer than 3 vertices");
    for (int idx : face) {
      if (idx < 0 || idx >= nv) throw InvalidShapeError("convex mesh: face " + std::to_string(f) + " index out of range");
    }
    for (std::size_t k = 1; k + 1 < face.size(); ++k) triangles.push_back({face[0], face[k], face[k + 1]});
  }
  if (triangles.size() < 4) throw InvalidShapeError("convex mesh: need at least 4 faces");

  // Closed and consistently wound: every directed edge appears exactly once
  // and its reverse appears exactly once.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) ++edges[{t[e], t[(e + 1) % 3]}];
  }
  for (const auto& [edge, count] : edges) {
    auto rev = edges.find({edge.second, edge.first});
    if (count != 1 || rev == edges.end() || rev->second != 1) {
      throw InvalidShapeError("convex mesh: not closed or inconsistently wound at edge (" +
                              std::to_string(edge.first) + ", " + std::to_string(edge.second) + ")");
    }
  }

  double scale = 0.0;
  for (const Vec3& v : vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const MeshMoments raw = ComputeMoments(vertices, triangles);
  if (!(raw.volume > 1e-12 * scale * scale * scale)) {
    throw InvalidShapeError("convex mesh: non-positive volume (inward winding or flat)");
  }
  const Vec3 centroid = raw.first / raw.volume;
  for (Vec3& v : vertices) v -= centroid;

  ConvexMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const double tol = 1e-9 * std::max(scale, 1e-12);
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& t = mesh.triangles[f];
    const Vec3 cross = (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    const double norm = cross.norm();
    if (!(norm > 1e-14 * scale * scale)) {
      throw InvalidShapeError("convex mesh: degenerate triangle " + std::to_string(f));
    }
    const Vec3 n = cross / norm;
    mesh.normals.push_back(n);
    mesh.offsets.push_back(n.dot(mesh.vertices[t[0]]));
  }
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      if (mesh.normals[f].dot(mesh.vertices[v]) - mesh.offsets[f] > tol) {
        throw InvalidShapeError("convex mesh: not convex (vertex " + std::to_string(v) +
                                " lies outside face " + std::to_string(f) + ")");
      }
    }
  }
  return ObjectShape(std::move(mesh));
}

std::string ObjectShape::type_name() const {
  return std::visit(Overloaded{[](const Sphere&) { return std::string("sphere"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Cylinder&) { return std::string("cylinder"); },
                               [](const ConvexMesh&) { return std::string("convex_mesh"); }},
                    shape_);
}

ObjectShape ObjectShape::Scaled(double factor) const {
  if (!PositiveFinite(factor)) throw InvalidShapeError("scale factor must be positive");
  return std::visit(
      Overloaded{[&](const Sphere& s) { return ObjectShape(Sphere{s.radius * factor}); },
                 [&](const Box& b) { return ObjectShape(Box{b.half_extents * factor}); },
                 [&](const Cylinder& c) {
                   return ObjectShape(Cylinder{c.radius * factor, c.half_height * factor});
                 },
                 [&](const ConvexMesh& m) {
                   ConvexMesh out = m;
                   for (Vec3& v : out.vertices) v *= factor;
                   for (double& o : out.offsets) o *= factor;
                   return ObjectShape(std::move(out));
                 }},
      shape_);
}

double ObjectShape::Volume() const {
  return std::visit(
      Overloaded{[](const Sphere& s) { return 4.0 / 3.0 * std::numbers::pi * s.radius * s.radius * s.radius; },
                 [](const Box& b) { return 8.0 * b.half_extents.prod(); },
                 [](const Cylinder& c) { return std::numbers::pi * c.radius * c.radius * 2.0 * c.half_height; },
                 [](const ConvexMesh& m) { return ComputeMoments(m.vertices, m.triangles).volume; }},
      shape_);
}

Mat3 ObjectShape::UnitInertia() const {
  return std::visit(
      Overloaded{[](const Sphere& s) -> Mat3 {
                   return Mat3::Identity() * (0.4 * s.radius * s.radius);
                 },
                 [](const Box& b) -> Mat3 {
                   const Vec3 sq = b.half_extents.cwiseProduct(b.half_extents);
                   return Vec3(sq.y() + sq.z(), sq.x() + sq.z(), sq.x() + sq.y()).asDiagonal() *
                          (1.0 / 3.0);
                 },
                 [](const Cylinder& c) -> Mat3 {
                   const double r2 = c.radius * c.radius;
                   const double h2 = c.half_height * c.half_height;
                   const double lateral = (3.0 * r2 + 4.0 * h2) / 12.0;
                   return Vec3(lateral, lateral, r2 / 2.0).asDiagonal();
                 },
                 [](const ConvexMesh& m) -> Mat3 {
                   const MeshMoments mm = ComputeMoments(m.vertices, m.triangles);
                   const Mat3 inertia = Mat3::Identity() * mm.covariance.trace() - mm.covariance;
                   return inertia / mm.volume;
                 }},
      shape_);
}

double ObjectShape::BoundingRadius() const {
  return std::visit(Overloaded{[](const Sphere& s) { return s.radius; },
                               [](const Box& b) { return b.half_extents.norm(); },
                               [](const Cylinder& c) { return std::hypot(c.radius, c.half_height); },
                               [](const ConvexMesh& m) {
                                 double r = 0.0;
                                 for (const Vec3& v : m.vertices) r = std::max(r, v.norm());
                                 return r;
                               }},
                    shape_);
}

SurfaceQuery ObjectShape::NearestLocal(const Vec3& x) const {
  return std::visit(Overloaded{[&](const Sphere& s) { return SphereNearest(s, x); },
                               [&](const Box& b) { return BoxNearest(b, x); },
                               [&](const Cylinder& c) { return CylinderNearest(c, x); },
                               [&](const ConvexMesh& m) { return MeshNearest(m, x); }},
                    shape_);
}

SurfaceQuery NearestSurface(const ObjectShape& shape, const Transform& pose, const Vec3& query) {
  // Same expression as the batch path, so both agree bit for bit.
  const Mat3 rt = pose.rotation.transpose();
  const Vec3 local = rt * (query - pose.translation);
  SurfaceQuery q = shape.NearestLocal(local);
  q.point = pose.Apply(q.point);
  q.normal = pose.rotation * q.normal;
  return q;
}

void BatchNearestSurface(const ObjectShape& shape, const Transform& pose,
                         std::span<const Vec3> queries, std::span<SurfaceQuery> out) {
  if (out.size() != queries.size()) {
    throw ContractViolationError("BatchNearestSurface: output size differs from query count");
  }
  const Mat3 rt = pose.rotation.transpose();
  std::visit(
      [&](const auto& s) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
          const Vec3 local = rt * (queries[i] - pose.translation);
          SurfaceQuery q;
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Sphere>) {
            q = SphereNearest(s, local);
          } else if constexpr (std::is_same_v<T, Box>) {
            q = BoxNearest(s, local);
          } else if constexpr (std::is_same_v<T, Cylinder>) {
            q = CylinderNearest(s, local);
          } else {
            q = MeshNearest(s, local);
          }
          q.point = pose.Apply(q.point);
          q.normal = pose.rotation * q.normal;
          out[i] = q;
        }
      },
      shape.variant());
}

std::vector<SurfaceQuery> BatchNearestSurface(const ObjectShape& shape, const Transform& pose,
                                              std::span<const Vec3> queries) {
  std::vector<SurfaceQuery> out(queries.size());
  BatchNearestSurface(shape, pose, queries, std::span<SurfaceQuery>(out));
  return out;
}

ObjectShape ReadOffMesh(std::istream& in, const std::string& source) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw InvalidShapeError(source + ": truncated OFF file");
    return tokens[pos++];
  };
  auto next_number = [&]() {
    const std::string& t = next();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw InvalidShapeError(source + ": bad number '" + t + "'");
    }
  };
  auto next_int = [&]() {
    const double v = next_number();
    if (v != std::floor(v) || v < 0) throw InvalidShapeError(source + ": expected non-negative integer");
    return static_cast<int>(v);
  };
  if (next() != "OFF") throw InvalidShapeError(source + ": missing OFF header");
  const int nv = next_int();
  const int nf = next_int();
  next_int();  // edge count, unused
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    const double x = next_number();
    const double y = next_number();
    const double z = next_number();
    vertices.emplace_back(x, y, z);
  }
  std::vector<std::vector<int>> faces(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    const int k = next_int();
    for (int i = 0; i < k; ++i) faces[f].push_back(next_int());
  }
  try {
    return ObjectShape::MakeConvexMesh(std::move(vertices), faces);
  } catch (const InvalidShapeError& e) {
    throw InvalidShapeError(source + ": " + e.what());
  }
}

ObjectShape LoadOffMesh(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open OFF file");
  return ReadOffMesh(in, file.string());
}

ObjectShape ParseObjectShape(const nlohmann::json& j, const std::string& path,
                             const std::filesystem::path& base_dir) {
  const std::string type = ju::StringOr(j, "type", "", path);
  try {
    if (type == "sphere") {
      return ObjectShape::MakeSphere(ju::Number(ju::Require(j, "radius", path), ju::Child(path, "radius")));
    }
    if (type == "box") {
      return ObjectShape::MakeBox(ju::ReadVec3(ju::Require(j, "half_extents", path), ju::Child(path, "half_extents")));
    }
    if (type == "cylinder") {
      return ObjectShape::MakeCylinder(
          ju::Number(ju::Require(j, "radius", path), ju::Child(path, "radius")),
          ju::Number(ju::Require(j, "half_height", path), ju::Child(path, "half_height")));
    }
    if (type == "convex_mesh") {
      if (j.contains("off")) {
        if (!j["off"].is_string()) ju::Fail(ju::Child(path, "off"), "expected file path");
        std::filesystem::path file = j["off"].get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        return LoadOffMesh(file);
      }
      const ju::Json& vj = ju::Require(j, "vertices", path);
      const ju::Json& fj = ju::Require(j, "faces", path);
      if (!vj.is_array() || !fj.is_array()) ju::Fail(path, "vertices and faces must be arrays");
      std::vector<Vec3> vertices;
      for (std::size_t i = 0; i < vj.size(); ++i) {
        vertices.push_back(ju::ReadVec3(vj[i], ju::Index(ju::Child(path, "vertices"), i)));
      }
      std::vector<std::vector<int>> faces;
      for (std::size_t i = 0; i < fj.size(); ++i) {
        const std::string fp = ju::Index(ju::Child(path, "faces"), i);
        if (!fj[i].is_array()) ju::Fail(fp, "expected array of vertex indices");
        std::vector<int> face;
        for (const auto& idx : fj[i]) {
          if (!idx.is_number_integer()) ju::Fail(fp, "expected integer vertex index");
          face.push_back(idx.get<int>());
        }
        faces.push_back(std::move(face));
      }
      return ObjectShape::MakeConvexMesh(std::move(vertices), faces);
    }
  } catch (const InvalidShapeError& e) {
    throw InvalidShapeError(path + ": " + e.what());
  }
  ju::Fail(ju::Child(path, "type"), "unknown shape type '" + type + "'");
}

nlohmann::json ObjectShapeToJson(const ObjectShape& shape) {
  return std::visit(
      Overloaded{[](const Sphere& s) -> ju::Json { return {{"type", "sphere"}, {"radius", s.radius}}; },
                 [](const Box& b) -> ju::Json {
                   return {{"type", "box"}, {"half_extents", ju::WriteVec3(b.half_extents)}};
                 },
                 [](const Cylinder& c) -> ju::Json {
                   return {{"type", "cylinder"}, {"radius", c.radius}, {"half_height", c.half_height}};
                 },
                 [](const ConvexMesh& m) -> ju::Json {
                   ju::Json v = ju::Json::array(), f = ju::Json::array();
                   for (const Vec3& p : m.vertices) v.push_back(ju::WriteVec3(p));
                   for (const auto& t : m.triangles) f.push_back({t[0], t[1], t[2]});
                   return {{"type", "convex_mesh"}, {"vertices", v}, {"faces", f}};
                 }},
      shape.variant());
}

}  // namespace taxelsim
