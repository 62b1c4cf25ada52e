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

#ifndef TAXELSIM_RANDOM_H_
#define TAXELSIM_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

#include "taxelsim/rotation.h"

namespace taxelsim {

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Sub-seed for stream `index`: Mix64(master + (index + 1) * golden-gamma).
// Distinct indices map to distinct counters, so streams never share a seed.
std::uint64_t StreamSeed(std::uint64_t master_seed, std::uint64_t index);

// One environment's private random stream. Not thread-safe; each
// environment owns exactly one.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t index() const { return index_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Canonical();
  // Uniform in [low, high]; returns low exactly when low == high.
  double Uniform(double low, double high);
  double Normal(double mean, double stddev);
  // Haar-uniform rotation via a uniform point on the unit 3-sphere.
  Quaternion UniformQuaternion();

 private:
  std::uint64_t master_seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::vector<RngStream> MakeStreams(std::uint64_t master_seed, int n_envs);

}  // namespace taxelsim

#endif  // TAXELSIM_RANDOM_H_
