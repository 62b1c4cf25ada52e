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


#include "taxelsim/rotation.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "taxelsim/errors.h"
#include "test_support.h"

namespace taxelsim {
namespace {

using testing::Gen;
using testing::MaxAbs;

constexpr double kPi = std::numbers::pi;

Mat3 RotZ90() {
  Mat3 r;
  r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  return r;
}

TEST(Encode6D, IdentityGivesFirstTwoAxes) {
  const Rotation6D r = Encode6D(Mat3::Identity());
  EXPECT_EQ(r.a1, Vec3(1, 0, 0));
  EXPECT_EQ(r.a2, Vec3(0, 1, 0));
}

TEST(Encode6D, QuarterTurnAboutZ) {
  const Rotation6D r = Encode6D(RotZ90());
  EXPECT_EQ(r.a1, Vec3(0, 1, 0));
  EXPECT_EQ(r.a2, Vec3(-1, 0, 0));
}

TEST(Encode6D, RejectsNonOrthonormal) {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 1e-3;
  EXPECT_THROW(Encode6D(m), InvalidRotationError);
  EXPECT_THROW(Encode6D(-Mat3::Identity()), InvalidRotationError);
}

TEST(Encode6D, AcceptsDriftWithinTolerance) {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 1e-8;
  EXPECT_NO_THROW(Encode6D(m));
}

TEST(Decode6D, OrthonormalInputIsIdentity) {
  EXPECT_EQ(Decode6D({Vec3(1, 0, 0), Vec3(0, 1, 0)}), Mat3::Identity());
}

TEST(Decode6D, ScalingIsNormalizedAway) {
  EXPECT_LT(MaxAbs(Decode6D({Vec3(2, 0, 0), Vec3(0, 3, 0)}) - Mat3::Identity()), 1e-15);
}

TEST(Decode6D, GramSchmidtRemovesFirstAxisComponent) {
  const Mat3 r = Decode6D({Vec3(1, 0, 0), Vec3(1, 1, 0)});
  EXPECT_LT((r.col(1) - Vec3(0, 1, 0)).norm(), 1e-15);
  EXPECT_LT((r.col(2) - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(Decode6D, DegenerateInputsThrow) {
  EXPECT_THROW(Decode6D({Vec3::Zero(), Vec3(0, 1, 0)}), DegenerateInputError);
  EXPECT_THROW(Decode6D({Vec3(1, 0, 0), Vec3(-2, 0, 0)}), DegenerateInputError);
  EXPECT_THROW(Decode6D({Vec3(1, 0, 0), Vec3::Zero()}), DegenerateInputError);
}

TEST(RotationDistance, ReferenceAngles) {
  EXPECT_EQ(RotationDistance(RotZ90(), RotZ90()), 0.0);
  EXPECT_NEAR(RotationDistance(Mat3::Identity(), RotZ90()), kPi / 2, 1e-15);
  EXPECT_NEAR(RotationDistance(Mat3::Identity(), AxisAngle(Vec3::UnitX(), kPi)), kPi, 1e-7);
}

TEST(RotationProperty, RoundTripOverRandomRotations) {
  Gen g(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = g.Rotation();
    worst = std::max(worst, MaxAbs(Decode6D(Encode6D(r)) - r));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(RotationProperty, DecodedMatricesAreRotations) {
  Gen g(12);
  for (int i = 0; i < 2000; ++i) {
    const Rotation6D in{g.Box(2.0), g.Box(2.0)};
    if (in.a1.norm() < 1e-3 || in.a1.normalized().cross(in.a2).norm() < 1e-3) continue;
    EXPECT_TRUE(IsRotation(Decode6D(in), 1e-9));
  }
}

TEST(RotationProperty, DoubleCoverCollapsesExactly) {
  Gen g(13);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Quaterniond e = g.EigenQuaternion();
    const Quaternion q{e.w(), e.x(), e.y(), e.z()};
    EXPECT_EQ(Encode6D(QuaternionToMatrix(q)).ToArray(), Encode6D(QuaternionToMatrix(-q)).ToArray());
  }
}

TEST(RotationProperty, NearbyRotationsHaveNearbyEncodings) {
  Gen g(14);
  for (int i = 0; i < 5000; ++i) {
    const Mat3 r1 = g.Rotation();
    const Mat3 r2 = r1 * AxisAngle(g.UnitVector(), g.Uniform(0.0, 9e-4));
    ASSERT_LT(RotationDistance(r1, r2), 1e-3);
    EXPECT_LT(Encode6D(r1).MaxAbsDifference(Encode6D(r2)), 1e-2);
  }
}

TEST(RotationProperty, QuaternionChartJumpsNearHalfTurn) {
  // Rotations just either side of pi about x are close, but their
  // canonical quaternions sit near opposite poles.
  const Mat3 a = AxisAngle(Vec3::UnitX(), kPi - 1e-4);
  const Mat3 b = AxisAngle(Vec3::UnitX(), kPi + 1e-4);
  EXPECT_LT(RotationDistance(a, b), 1e-3);
  EXPECT_GT(MatrixToQuaternion(a).MaxAbsDifference(MatrixToQuaternion(b)), 1.9);
  EXPECT_LT(Encode6D(a).MaxAbsDifference(Encode6D(b)), 1e-3);
}

TEST(RotationProperty, DistanceIsSymmetricAndSatisfiesTriangleInequality) {
  Gen g(15);
  for (int i = 0; i < 5000; ++i) {
    const Mat3 a = g.Rotation(), b = g.Rotation(), c = g.Rotation();
    EXPECT_NEAR(RotationDistance(a, b), RotationDistance(b, a), 1e-12);
    EXPECT_LE(RotationDistance(a, c), RotationDistance(a, b) + RotationDistance(b, c) + 1e-9);
  }
}

TEST(Quaternion, MatchesEigenConversion) {
  Gen g(16);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Quaterniond e = g.EigenQuaternion();
    const Mat3 m = QuaternionToMatrix({e.w(), e.x(), e.y(), e.z()});
    EXPECT_LT(MaxAbs(m - e.toRotationMatrix()), 1e-14);
  }
}

TEST(Quaternion, MatrixRoundTripIsCanonical) {
  Gen g(17);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = g.Rotation();
    const Quaternion q = MatrixToQuaternion(r);
    EXPECT_GE(q.w, 0.0);
    EXPECT_NEAR(q.Norm(), 1.0, 1e-12);
    EXPECT_LT(MaxAbs(QuaternionToMatrix(q) - r), 1e-12);
  }
}

TEST(ExpLog, RoundTripBelowHalfTurn) {
  Gen g(18);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = g.UnitVector() * g.Uniform(0.0, kPi - 1e-3);
    EXPECT_LT((LogMap(ExpMap(w)) - w).norm(), 1e-9);
  }
  EXPECT_EQ(ExpMap(Vec3::Zero()), Mat3::Identity());
  EXPECT_EQ(LogMap(Mat3::Identity()), Vec3::Zero());
}

TEST(QuarterTurn, AxisAlignedTurnsAreExact) {
  EXPECT_EQ(QuarterTurn(Vec3::UnitZ()), RotZ90());
  for (const Vec3& axis : std::vector<Vec3>{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, 0, -2)}) {
    const Mat3 q = QuarterTurn(axis);
    EXPECT_EQ(q * q * q * q, Mat3::Identity());
  }
}

TEST(Orthonormalize, ProjectsPerturbedMatrix) {
  Gen g(19);
  for (int i = 0; i < 200; ++i) {
    const Mat3 r = g.Rotation();
    Mat3 noisy = r;
    for (int k = 0; k < 9; ++k) noisy(k / 3, k % 3) += g.Uniform(-1e-6, 1e-6);
    const Mat3 fixed = Orthonormalize(noisy);
    EXPECT_TRUE(IsRotation(fixed, 1e-12));
    EXPECT_LT(MaxAbs(fixed - r), 1e-5);
  }
}

TEST(Transform, InverseComposesToIdentity) {
  Gen g(20);
  const Transform t = g.Pose(1.0);
  const Transform id = t * t.Inverse();
  EXPECT_LT(id.translation.norm(), 1e-15);
  EXPECT_LT(MaxAbs(id.rotation - Mat3::Identity()), 1e-15);
}

}  // namespace
}  // namespace taxelsim
