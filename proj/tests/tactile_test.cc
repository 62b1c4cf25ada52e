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

#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "taxelsim/errors.h"
#include "taxelsim/hand_model.h"
#include "taxelsim/oracle.h"
#include "taxelsim/tactile.h"
#include "test_support.h"

namespace taxelsim {
namespace {

ContactMaterial Linear(double k) {
  ContactMaterial m;
  m.stiffness = k;
  return m;
}

TEST(DetectContactTest, StrictSignRule) {
  SurfaceQuery s;
  s.point = Vec3(0, 0, 1);
  s.normal = Vec3(0, 0, 1);
  EXPECT_TRUE(DetectContact(Vec3(0, 0, 0.5), s));
  EXPECT_FALSE(DetectContact(Vec3(0, 0, 1.5), s));
  EXPECT_FALSE(DetectContact(Vec3(0, 0, 1.0), s));  // on the surface: no contact
  EXPECT_FALSE(DetectContact(Vec3(3, -2, 1.0), s));  // tangential offset only
}

TEST(TaxelForceTest, LinearLaw) {
  const ContactMaterial m = Linear(1000.0);
  EXPECT_DOUBLE_EQ(TaxelForce(0.01, m), 10.0);
  EXPECT_EQ(TaxelForce(0.0, m), 0.0);
  EXPECT_THROW(TaxelForce(-1e-9, m), ContractViolationError);
  EXPECT_THROW(TaxelForce(std::nan(""), m), ContractViolationError);
}

TEST(TaxelForceTest, TabulatedLawIsMonotoneAndInterpolates) {
  ContactMaterial m;
  m.stress_strain = {{0.5, 1.0e5}, {1.0, 3.0e5}};
  m.pad_thickness = 0.002;
  m.taxel_area = 1e-5;
  m.Validate();
  EXPECT_EQ(TaxelForce(0.0, m), 0.0);
  // Strain 0.5 hits the first knot: 1e5 Pa * 1e-5 m^2.
  EXPECT_NEAR(TaxelForce(0.001, m), 1.0, 1e-12);
  // Halfway between the knots.
  EXPECT_NEAR(TaxelForce(0.0015, m), 2.0, 1e-12);
  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double f = TaxelForce(i * 1e-5, m);
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(MaterialTest, RejectsBadTables) {
  ContactMaterial m;
  m.stress_strain = {{0.5, 1.0}, {0.4, 2.0}};
  EXPECT_THROW(m.Validate(), ConfigError);
  m.stress_strain = {{0.5, 2.0}, {0.6, 1.0}};
  EXPECT_THROW(m.Validate(), ConfigError);
  m.stress_strain = {{0.0, 1.0}};
  EXPECT_THROW(m.Validate(), ConfigError);
  ContactMaterial k0 = Linear(0.0);
  EXPECT_THROW(k0.Validate(), ConfigError);
}

TEST(MaterialTest, JsonRoundTrip) {
  ContactMaterial m;
  m.stiffness = 250.0;
  m.stress_strain = {{0.1, 10.0}, {0.2, 30.0}};
  m.min_depth = 1e-5;
  const ContactMaterial back = ParseContactMaterial(ContactMaterialToJson(m), "material");
  EXPECT_EQ(back.stiffness, m.stiffness);
  EXPECT_EQ(back.stress_strain, m.stress_strain);
  EXPECT_EQ(back.pad_thickness, m.pad_thickness);
  EXPECT_EQ(back.taxel_area, m.taxel_area);
  EXPECT_EQ(back.min_depth, m.min_depth);
  EXPECT_THROW(ParseContactMaterial(nlohmann::json{{"stiffness", -1.0}}, "material"), ConfigError);
}

TEST(WeightedCenterTest, TwoPoints) {
  // Depths 0.01 and 0.03 at k = 1000 give forces 10 and 30.
  const std::vector<Vec3> p = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const std::vector<double> f = {TaxelForce(0.01, Linear(1000.0)), TaxelForce(0.03, Linear(1000.0))};
  EXPECT_DOUBLE_EQ(f[0] + f[1], 40.0);
  const Vec3 mu = WeightedCenter(p, f);
  EXPECT_NEAR(mu.x(), 0.25, 1e-15);
  EXPECT_NEAR(mu.y(), 0.75, 1e-15);
  EXPECT_EQ(mu.z(), 0.0);
}

TEST(SenseFingertipTest, NoContactReportsSentinel) {
  const ObjectShape ball = ObjectShape::MakeSphere(0.01);
  const std::vector<Vec3> taxels = {Vec3(0.1, 0, 0), Vec3(0, 0.1, 0)};
  const Vec3 sentinel(7, 8, 9);
  const auto t = SenseFingertip(taxels, ball, Transform::Identity(), Linear(100.0), sentinel);
  EXPECT_EQ(t.total_force, 0.0);
  EXPECT_EQ(t.active_count, 0);
  EXPECT_EQ(t.contact_center, sentinel);
  for (const auto& r : t.readings) EXPECT_FALSE(r.active);
}

// Every subset of three taxels on the axes of a sphere of radius 1/2. All
// values are dyadic, so depths, forces and the centre come out exact.
TEST(SenseFingertipTest, EnumeratesAllActivationSubsets) {
  const ObjectShape ball = ObjectShape::MakeSphere(0.5);
  const std::array<double, 3> depth = {0.125, 0.25, 0.0625};
  const double k = 8.0;
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<Vec3> taxels;
    for (int j = 0; j < 3; ++j) {
      Vec3 p = Vec3::Zero();
      p[j] = (mask >> j) & 1 ? 0.5 - depth[j] : 0.75;
      taxels.push_back(p);
    }
    const auto t = SenseFingertip(taxels, ball, Transform::Identity(), Linear(k), Vec3(-1, -1, -1));
    Vec3 num = Vec3::Zero();
    double total = 0.0;
    int active = 0;
    for (int j = 0; j < 3; ++j) {
      const bool on = (mask >> j) & 1;
      EXPECT_EQ(t.readings[j].active, on) << "mask " << mask << " taxel " << j;
      if (!on) continue;
      EXPECT_EQ(t.readings[j].depth, depth[j]);
      EXPECT_EQ(t.readings[j].force, k * depth[j]);
      num += (k * depth[j]) * taxels[j];
      total += k * depth[j];
      ++active;
    }
    EXPECT_EQ(t.active_count, active);
    EXPECT_EQ(t.total_force, total);
    if (active == 0) {
      EXPECT_EQ(t.contact_center, Vec3(-1, -1, -1));
    } else {
      EXPECT_EQ(t.contact_center, num / total) << "mask " << mask;
    }
  }
}

TEST(SenseFingertipTest, MinDepthSuppressesShallowTaxels) {
  const ObjectShape ball = ObjectShape::MakeSphere(0.5);
  const std::vector<Vec3> taxels = {Vec3(0.5 - 0.125, 0, 0), Vec3(0, 0.5 - 0.0078125, 0)};
  ContactMaterial m = Linear(8.0);
  m.min_depth = 0.01;
  const auto t = SenseFingertip(taxels, ball, Transform::Identity(), m, Vec3::Zero());
  EXPECT_EQ(t.active_count, 1);
  EXPECT_TRUE(t.readings[0].active);
  EXPECT_FALSE(t.readings[1].active);
}

struct Scene {
  ObjectShape shape;
  Transform pose;
  std::vector<Vec3> taxels;
};

// A cloud of taxels scattered around a random primitive, a good share of
// them inside it.
Scene RandomScene(testing::Gen& g) {
  Scene s;
  switch (g.Int(0, 2)) {
    case 0: s.shape = ObjectShape::MakeSphere(g.Uniform(0.01, 0.05)); break;
    case 1: s.shape = ObjectShape::MakeBox(Vec3(g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04))); break;
    default: s.shape = ObjectShape::MakeCylinder(g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04)); break;
  }
  s.pose = g.Pose(0.1);
  const int n = g.Int(1, 40);
  for (int j = 0; j < n; ++j) s.taxels.push_back(s.pose.translation + g.Box(0.05));
  return s;
}

TEST(SenseFingertipPropertyTest, StiffnessCancelsFromCenter) {
  testing::Gen g(11);
  int with_contact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Scene s = RandomScene(g);
    const auto soft = SenseFingertip(s.taxels, s.shape, s.pose, Linear(1.0), Vec3::Zero());
    const auto hard = SenseFingertip(s.taxels, s.shape, s.pose, Linear(500.0), Vec3::Zero());
    ASSERT_EQ(soft.active_count, hard.active_count);
    if (soft.active_count == 0) continue;
    ++with_contact;
    EXPECT_EQ(soft.contact_center, hard.contact_center);
    // Force-weighted from the readings agrees with the depth-weighted value.
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const auto& r : hard.readings) {
      if (!r.active) continue;
      EXPECT_EQ(r.depth, soft.readings[&r - hard.readings.data()].depth);
      num += r.force * r.position;
      den += r.force;
    }
    EXPECT_LT((num / den - hard.contact_center).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(hard.total_force, 500.0 * soft.total_force, 1e-9 * hard.total_force);
  }
  EXPECT_GT(with_contact, 300);
}

TEST(SenseFingertipPropertyTest, CenterIsConvexCombinationOfActiveTaxels) {
  testing::Gen g(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Scene s = RandomScene(g);
    const auto t = SenseFingertip(s.taxels, s.shape, s.pose, Linear(100.0), Vec3::Zero());
    if (t.active_count == 0) continue;
    Vec3 combo = Vec3::Zero();
    double weight_sum = 0.0;
    for (const auto& r : t.readings) {
      if (!r.active) continue;
      ASSERT_GT(r.force, 0.0);
      const double w = r.force / t.total_force;
      combo += w * r.position;
      weight_sum += w;
    }
    EXPECT_NEAR(weight_sum, 1.0, 1e-12);
    EXPECT_LT((combo - t.contact_center).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SenseFingertipPropertyTest, MatchesUnculledBruteForce) {
  testing::Gen g(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const Scene s = RandomScene(g);
    const ContactMaterial m = Linear(g.Uniform(10.0, 1000.0));
    const auto fast = SenseFingertip(s.taxels, s.shape, s.pose, m, Vec3(1, 2, 3));
    const auto ref = BruteForceSense(s.taxels, s.shape, s.pose, m, Vec3(1, 2, 3));
    ASSERT_EQ(fast.active_count, ref.active_count);
    EXPECT_NEAR(fast.total_force, ref.total_force, 1e-12 * (1.0 + ref.total_force));
    EXPECT_LT((fast.contact_center - ref.contact_center).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SenseFingertipPropertyTest, DeeperPressGivesMoreForce) {
  // Taxels under the top face of a wide box; raising the box deepens every
  // active taxel by the same amount.
  testing::Gen g(14);
  const ObjectShape slab = ObjectShape::MakeBox(Vec3(1.0, 1.0, 0.5));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> taxels;
    for (int j = 0; j < 20; ++j) taxels.emplace_back(g.Uniform(-0.2, 0.2), g.Uniform(-0.2, 0.2), g.Uniform(-0.01, 0.01));
    double prev = -1.0;
    int prev_active = 0;
    for (int step = 0; step < 10; ++step) {
      const Transform pose = Transform::FromTranslation(Vec3(0, 0, -0.5 + 0.002 * step));
      const auto t = SenseFingertip(taxels, slab, pose, Linear(100.0), Vec3::Zero());
      EXPECT_GE(t.active_count, prev_active);
      if (t.active_count > 0) {
        EXPECT_GT(t.total_force, prev);
      }
      prev = t.total_force;
      prev_active = t.active_count;
    }
  }
}

TEST(SenseFingertipPropertyTest, TranslationEquivariance) {
  testing::Gen g(15);
  for (int trial = 0; trial < 500; ++trial) {
    Scene s = RandomScene(g);
    const auto before = SenseFingertip(s.taxels, s.shape, s.pose, Linear(100.0), Vec3::Zero());
    const Vec3 shift = g.Box(0.5);
    for (auto& p : s.taxels) p += shift;
    s.pose.translation += shift;
    const auto after = SenseFingertip(s.taxels, s.shape, s.pose, Linear(100.0), shift);
    ASSERT_EQ(before.active_count, after.active_count);
    EXPECT_NEAR(before.total_force, after.total_force, 1e-9);
    EXPECT_LT((before.contact_center + shift - after.contact_center).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SenseFingertipPropertyTest, MirroredPinchIsBalanced) {
  // Two pads mirrored through x = 0 squeeze a centred sphere.
  const HandModel hand = CanonicalHandModel();
  const std::vector<double> q(static_cast<std::size_t>(hand.num_joints()), 0.0);
  const TaxelFrameBatch frames = ForwardKinematics(hand, q);
  const auto pad = frames.FingerPositions(0);
  const Vec3 centroid = [&] {
    Vec3 c = Vec3::Zero();
    for (const auto& p : pad) c += p;
    return Vec3(c / static_cast<double>(pad.size()));
  }();
  testing::Gen g(16);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = g.Uniform(0.01, 0.03);
    const double gap = r + g.Uniform(-0.004, 0.0);
    std::vector<Vec3> left, right;
    for (const auto& p : pad) {
      // Pad points local to the centroid, pressed in along x.
      const Vec3 local = p - centroid;
      right.emplace_back(gap + std::abs(local.x()), local.y(), local.z());
      left.emplace_back(-(gap + std::abs(local.x())), local.y(), local.z());
    }
    const ObjectShape ball = ObjectShape::MakeSphere(r);
    const auto a = SenseFingertip(right, ball, Transform::Identity(), Linear(100.0), Vec3::Zero());
    const auto b = SenseFingertip(left, ball, Transform::Identity(), Linear(100.0), Vec3::Zero());
    EXPECT_EQ(a.active_count, b.active_count);
    EXPECT_NEAR(a.total_force, b.total_force, 1e-9);
    if (a.active_count > 0) {
      EXPECT_NEAR(a.contact_center.x(), -b.contact_center.x(), 1e-12);
      EXPECT_NEAR(a.contact_center.y(), b.contact_center.y(), 1e-12);
    }
  }
}

TEST(SenseHandTest, OnlyTheTouchedFingerReports) {
  const HandModel hand = CanonicalHandModel();
  const std::vector<double> q(static_cast<std::size_t>(hand.num_joints()), 0.0);
  const TaxelFrameBatch frames = ForwardKinematics(hand, q);
  const int fingers = static_cast<int>(frames.fingertip_poses.size());
  for (int f = 0; f < fingers; ++f) {
    // A small ball sunk 1 mm into the middle taxel of finger f.
    const auto pos = frames.FingerPositions(f);
    const auto nrm = frames.FingerNormals(f);
    const std::size_t mid = pos.size() / 2;
    const double r = 0.003;
    const Transform pose = Transform::FromTranslation(pos[mid] + (r - 0.001) * nrm[mid]);
    const auto tactile = SenseHand(frames, ObjectShape::MakeSphere(r), pose, Linear(100.0));
    ASSERT_EQ(static_cast<int>(tactile.size()), fingers);
    for (int other = 0; other < fingers; ++other) {
      if (other == f) {
        EXPECT_GT(tactile[other].total_force, 0.0) << "finger " << f;
      } else {
        EXPECT_EQ(tactile[other].total_force, 0.0) << "finger " << other << " touched by " << f;
        EXPECT_EQ(tactile[other].contact_center, frames.fingertip_poses[other].translation);
      }
    }
  }
}

}  // namespace
}  // namespace taxelsim
