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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "taxelsim/errors.h"
#include "taxelsim/oracle.h"
#include "test_support.h"

namespace taxelsim {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;

std::vector<std::pair<std::string, ObjectShape>> Shapes() {
  const std::vector<Vec3> v{{0.03, 0, 0}, {-0.03, 0, 0}, {0, 0.03, 0}, {0, -0.03, 0}, {0, 0, 0.03}, {0, 0, -0.03}};
  const std::vector<std::vector<int>> f{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                        {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return {{"sphere", ObjectShape::MakeSphere(0.03)},
          {"box", ObjectShape::MakeBox(Vec3(0.02, 0.03, 0.025))},
          {"cylinder", ObjectShape::MakeCylinder(0.025, 0.04)},
          {"octahedron", ObjectShape::MakeConvexMesh(v, f)}};
}

TEST(NearestSurface, SphereInteriorPoint) {
  const auto q = NearestSurface(ObjectShape::MakeSphere(0.05), Transform::Identity(), Vec3(0, 0, 0.04));
  EXPECT_LT((q.point - Vec3(0, 0, 0.05)).norm(), 1e-15);
  EXPECT_LT((q.normal - Vec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_NEAR(q.signed_distance, -0.01, 1e-15);
}

TEST(NearestSurface, SphereExteriorPoint) {
  const auto q = NearestSurface(ObjectShape::MakeSphere(0.05), Transform::Identity(), Vec3(0, 0, 0.06));
  EXPECT_LT((q.point - Vec3(0, 0, 0.05)).norm(), 1e-15);
  EXPECT_LT((q.normal - Vec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_NEAR(q.signed_distance, 0.01, 1e-15);
}

TEST(NearestSurface, BoxNearestFace) {
  const auto q = NearestSurface(ObjectShape::MakeBox(Vec3(0.5, 0.5, 0.5)), Transform::Identity(), Vec3(0.4, 0, 0));
  EXPECT_LT((q.point - Vec3(0.5, 0, 0)).norm(), 1e-15);
  EXPECT_EQ(q.normal, Vec3(1, 0, 0));
  EXPECT_NEAR(q.signed_distance, -0.1, 1e-15);
}

TEST(NearestSurface, BoxCenterTieBreaksOnX) {
  const ObjectShape box = ObjectShape::MakeBox(Vec3(0.5, 0.5, 0.5));
  const auto a = NearestSurface(box, Transform::Identity(), Vec3::Zero());
  const auto b = NearestSurface(box, Transform::Identity(), Vec3::Zero());
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(std::abs(a.normal.x()), 1.0);
  EXPECT_EQ(a.point, 0.5 * a.normal);
}

TEST(NearestSurface, CylinderCapAndSide) {
  const ObjectShape c = ObjectShape::MakeCylinder(0.02, 0.05);
  const auto side = NearestSurface(c, Transform::Identity(), Vec3(0.03, 0, 0.01));
  EXPECT_LT((side.point - Vec3(0.02, 0, 0.01)).norm(), 1e-15);
  const auto cap = NearestSurface(c, Transform::Identity(), Vec3(0.005, 0, 0.047));
  EXPECT_LT((cap.point - Vec3(0.005, 0, 0.05)).norm(), 1e-15);
  EXPECT_EQ(cap.normal, Vec3(0, 0, 1));
  EXPECT_LT(cap.signed_distance, 0.0);
}

TEST(BatchNearestSurface, MatchesScalarCalls) {
  Gen g(41);
  for (const auto& [name, shape] : Shapes()) {
    const Transform pose = g.Pose(0.05);
    std::vector<Vec3> queries(600);
    for (auto& x : queries) x = pose.translation + g.Box(0.06);
    const auto batch = BatchNearestSurface(shape, pose, queries);
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto one = NearestSurface(shape, pose, queries[i]);
      ASSERT_EQ(batch[i].point, one.point) << name;
      ASSERT_EQ(batch[i].normal, one.normal) << name;
      ASSERT_EQ(batch[i].signed_distance, one.signed_distance) << name;
    }
  }
}

TEST(BatchNearestSurface, EmptyAndMixedBatches) {
  const ObjectShape s = ObjectShape::MakeSphere(0.05);
  EXPECT_TRUE(BatchNearestSurface(s, Transform::Identity(), std::vector<Vec3>{}).empty());
  const auto out = BatchNearestSurface(s, Transform::Identity(), std::vector<Vec3>{{0, 0, 0.07}, {0, 0.01, 0}});
  EXPECT_GT(out[0].signed_distance, 0.0);
  EXPECT_LT(out[1].signed_distance, 0.0);
}

// The analytic query must beat every one of ~10^5 dense samples and stay
// within the sampling resolution of the best one.
TEST(NearestSurfaceProperty, AgreesWithDenseSampleMinimizer) {
  Gen g(42);
  for (const auto& [name, shape] : Shapes()) {
    const auto samples = DenseSurfaceSamples(shape, 0.02);
    std::vector<SurfaceSample> dense = samples;
    if (name == "box" || name == "octahedron") {
      // Flat faces only contribute corners; fill them in.
      dense.clear();
      for (const auto& patch : SurfacePatches(shape)) {
        for (int i = 0; i <= 150; ++i) {
          for (int k = 0; k <= 150; ++k) dense.push_back({patch.point(i / 150.0, k / 150.0), patch.normal(0, 0)});
        }
      }
    }
    ASSERT_GE(dense.size(), 60000u) << name;
    for (int trial = 0; trial < 40; ++trial) {
      const Vec3 x = g.UnitVector() * g.Uniform(0.035, 0.08);
      const auto q = shape.NearestLocal(x);
      double best = INFINITY;
      for (const auto& s : dense) best = std::min(best, (s.point - x).norm());
      const double d = (q.point - x).norm();
      EXPECT_LE(d, best + 1e-12) << name;
      EXPECT_GT(d, best - 1e-3) << name;
      const auto oracle = OracleNearest(shape, Transform::Identity(), x);
      EXPECT_LT((q.point - oracle.point).norm(), 1e-4) << name;
      // Normals are only well defined where the nearest point is inside a
      // face, which is where the oracle's face normal points at the query.
      if ((oracle.normal - (x - oracle.point).normalized()).norm() < 1e-6) {
        EXPECT_LT((q.normal - oracle.normal).norm(), 1e-3) << name;
      }
    }
  }
}

TEST(NearestSurfaceProperty, PoseEquivariance) {
  Gen g(43);
  for (const auto& [name, shape] : Shapes()) {
    for (int trial = 0; trial < 500; ++trial) {
      const Transform t = g.Pose(0.2);
      const Vec3 x = t.translation + g.Box(0.06);
      const auto world = NearestSurface(shape, t, x);
      const auto local = NearestSurface(shape, Transform::Identity(), t.Inverse().Apply(x));
      EXPECT_LT((world.point - t.Apply(local.point)).norm(), 1e-9) << name;
      EXPECT_LT((world.normal - t.ApplyDirection(local.normal)).norm(), 1e-9) << name;
      EXPECT_NEAR(world.signed_distance, local.signed_distance, 1e-9) << name;
    }
  }
}

TEST(NearestSurfaceProperty, QueryFromNearestPointIsOnSurface) {
  Gen g(44);
  for (const auto& [name, shape] : Shapes()) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Transform t = g.Pose(0.1);
      const auto q = NearestSurface(shape, t, t.translation + g.Box(0.06));
      EXPECT_NEAR(q.normal.norm(), 1.0, 1e-9) << name;
      EXPECT_LT(std::abs(NearestSurface(shape, t, q.point).signed_distance), 1e-7) << name;
    }
  }
}

TEST(NearestSurfaceProperty, SignMatchesContainmentOracle) {
  Gen g(45);
  for (const auto& [name, shape] : Shapes()) {
    const auto samples = DenseSurfaceSamples(shape);
    for (int trial = 0; trial < 2000; ++trial) {
      const Vec3 x = g.Box(0.06);
      const auto q = shape.NearestLocal(x);
      if (std::abs(q.signed_distance) < 1e-5) continue;
      EXPECT_EQ(q.signed_distance < 0.0, OracleContains(samples, x)) << name;
    }
  }
}

TEST(ObjectShape, RejectsInvalidSizes) {
  EXPECT_THROW(ObjectShape::MakeSphere(0.0), InvalidShapeError);
  EXPECT_THROW(ObjectShape::MakeBox(Vec3(0.1, -0.1, 0.1)), InvalidShapeError);
  EXPECT_THROW(ObjectShape::MakeCylinder(0.1, 0.0), InvalidShapeError);
}

TEST(ObjectShape, RejectsBadMeshes) {
  const std::vector<Vec3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const std::vector<std::vector<int>> good{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  EXPECT_NO_THROW(ObjectShape::MakeConvexMesh(tet, good));
  const std::vector<std::vector<int>> open{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}};
  EXPECT_THROW(ObjectShape::MakeConvexMesh(tet, open), InvalidShapeError);
  const std::vector<std::vector<int>> inward{{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  EXPECT_THROW(ObjectShape::MakeConvexMesh(tet, inward), InvalidShapeError);
  // A dented octahedron: one apex pushed inside the equator.
  const std::vector<Vec3> dent{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, -0.2}, {0, 0, -1}};
  const std::vector<std::vector<int>> f{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                        {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  EXPECT_THROW(ObjectShape::MakeConvexMesh(dent, f), InvalidShapeError);
}

TEST(ObjectShape, VolumesInertiaAndBounds) {
  const auto shapes = Shapes();
  const double r = 0.03;
  EXPECT_NEAR(shapes[0].second.Volume(), 4.0 / 3.0 * kPi * r * r * r, 1e-18);
  EXPECT_NEAR(shapes[1].second.Volume(), 8 * 0.02 * 0.03 * 0.025, 1e-18);
  EXPECT_NEAR(shapes[2].second.Volume(), kPi * 0.025 * 0.025 * 0.08, 1e-18);
  EXPECT_NEAR(shapes[3].second.Volume(), 4.0 / 3.0 * r * r * r, 1e-18);
  EXPECT_NEAR(shapes[0].second.UnitInertia()(0, 0), 0.4 * r * r, 1e-18);
  EXPECT_NEAR(shapes[1].second.UnitInertia()(0, 0), (0.03 * 0.03 + 0.025 * 0.025) / 3.0, 1e-18);
  EXPECT_NEAR(shapes[3].second.UnitInertia()(2, 2), 0.2 * r * r, 1e-15);
  EXPECT_NEAR(shapes[1].second.BoundingRadius(), Vec3(0.02, 0.03, 0.025).norm(), 1e-15);
  EXPECT_NEAR(shapes[0].second.Scaled(2.0).Volume(), 8.0 * shapes[0].second.Volume(), 1e-18);
}

TEST(OffMesh, ReadsCommentedFile) {
  std::istringstream in(
      "OFF\n# tetrahedron\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  const ObjectShape s = ReadOffMesh(in, "tet.off");
  EXPECT_EQ(s.type_name(), "convex_mesh");
  EXPECT_NEAR(s.Volume(), 1.0 / 6.0, 1e-15);
}

TEST(OffMesh, MalformedInputNamesSource) {
  std::istringstream in("OFF\n4 4 0\n0 0 0\n");
  try {
    ReadOffMesh(in, "broken.off");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.off"), std::string::npos);
  }
}

TEST(ObjectShapeJson, RoundTrips) {
  for (const auto& [name, shape] : Shapes()) {
    const ObjectShape back = ParseObjectShape(ObjectShapeToJson(shape), "shape", ".");
    EXPECT_EQ(back.type_name(), shape.type_name());
    EXPECT_NEAR(back.Volume(), shape.Volume(), 1e-18) << name;
  }
  EXPECT_THROW(ParseObjectShape({{"type", "torus"}}, "shape", "."), ConfigError);
}

}  // namespace
}  // namespace taxelsim
