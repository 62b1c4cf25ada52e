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


#include "taxelsim/random.h"

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

namespace taxelsim {
namespace {

constexpr double kPi = std::numbers::pi;

// E[theta] for Haar rotations, by Simpson quadrature of the angle density
// (1 - cos t) / pi on [0, pi].
double HaarMeanAngleByQuadrature() {
  const int n = 20000;
  const double h = kPi / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double f = t * (1.0 - std::cos(t)) / kPi;
    sum += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
  }
  return sum * h / 3.0;
}

TEST(RngStream, SameSeedAndIndexRepeat) {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngStream, NeighbouringStreamsDiffer) {
  RngStream a(42, 0), b(42, 1);
  int differ = 0;
  for (int i = 0; i < 1000; ++i) differ += a.NextU64() != b.NextU64();
  EXPECT_GT(differ, 0);
}

TEST(RngStream, StreamSeedsAreDistinctAcrossIndices) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 4096; ++i) seeds.insert(StreamSeed(7, i));
  EXPECT_EQ(seeds.size(), 4096u);
}

TEST(MakeStreams, SingleStreamIsIndexZero) {
  auto streams = MakeStreams(9, 1);
  ASSERT_EQ(streams.size(), 1u);
  RngStream direct(9, 0);
  EXPECT_EQ(streams[0].index(), 0u);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(streams[0].NextU64(), direct.NextU64());
}

TEST(MakeStreams, ConsumptionInOneStreamLeavesOthersAlone) {
  auto a = MakeStreams(5, 3);
  auto b = MakeStreams(5, 3);
  for (int i = 0; i < 777; ++i) a[1].NextU64();
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a[0].NextU64(), b[0].NextU64());
    ASSERT_EQ(a[2].NextU64(), b[2].NextU64());
  }
}

TEST(RngStream, UniformRespectsBoundsAndPointIntervals) {
  RngStream s(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.Uniform(-0.25, 0.75);
    ASSERT_GE(u, -0.25);
    ASSERT_LE(u, 0.75);
  }
  EXPECT_EQ(s.Uniform(0.3, 0.3), 0.3);
  const double c = s.Canonical();
  EXPECT_GE(c, 0.0);
  EXPECT_LT(c, 1.0);
}

TEST(RngStream, UniformQuaternionIsUnit) {
  RngStream s(2, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_NEAR(s.UniformQuaternion().Norm(), 1.0, 1e-12);
}

TEST(RngStream, QuadratureOracleMatchesClosedForm) {
  EXPECT_NEAR(HaarMeanAngleByQuadrature(), kPi / 2 + 2 / kPi, 1e-12);
}

TEST(RngStream, UniformRotationMeanAngleMatchesHaarOracle) {
  RngStream s(3, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += RotationDistance(Mat3::Identity(), QuaternionToMatrix(s.UniformQuaternion()));
  }
  const double mean_deg = sum / n * 180.0 / kPi;
  const double oracle_deg = HaarMeanAngleByQuadrature() * 180.0 / kPi;
  EXPECT_NEAR(oracle_deg, 126.48, 0.01);
  EXPECT_NEAR(mean_deg, oracle_deg, 1.0);
}

}  // namespace
}  // namespace taxelsim
