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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "taxelsim/errors.h"

namespace taxelsim {

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t StreamSeed(std::uint64_t master_seed, std::uint64_t index) {
  return Mix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t index)
    : master_seed_(master_seed),
      index_(index),
      engine_(StreamSeed(master_seed, index)) {}

double RngStream::Canonical() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::Uniform(double low, double high) {
  const double u = Canonical();
  if (low == high) return low;
  return std::min(high, low + (high - low) * u);
}

double RngStream::Normal(double mean, double stddev) {
  return mean + stddev * normal_(engine_);
}

Quaternion RngStream::UniformQuaternion() {
  const double u1 = Canonical();
  const double u2 = Canonical();
  const double u3 = Canonical();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double t2 = 2.0 * std::numbers::pi * u2;
  const double t3 = 2.0 * std::numbers::pi * u3;
  return {b * std::cos(t3), a * std::sin(t2), a * std::cos(t2), b * std::sin(t3)};
}

std::vector<RngStream> MakeStreams(std::uint64_t master_seed, int n_envs) {
  if (n_envs < 1) throw ConfigError("MakeStreams: n_envs must be >= 1");
  std::vector<RngStream> streams;
  streams.reserve(static_cast<std::size_t>(n_envs));
  for (int i = 0; i < n_envs; ++i) {
    streams.emplace_back(master_seed, static_cast<std::uint64_t>(i));
  }
  return streams;
}

}  // namespace taxelsim
