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

// Episode loop, per-environment trace files and the batch runner.
//
// Trace layout for environment i under the output directory:
//   env_<iiii>/header.json   config, episode draw, layouts, initial observation
//   env_<iiii>/steps.csv     one row per step: rewards, state, action, actor obs
//   env_<iiii>/tactile.csv   one row per (step, finger): F, mu, active taxels
// and summary.json at the top level. Numbers are written in shortest
// round-trip form, so identical runs give identical bytes.

#ifndef TAXELSIM_RUNNER_H_
#define TAXELSIM_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "taxelsim/env.h"
#include "taxelsim/policy.h"

namespace taxelsim {

// Shortest decimal string that parses back to exactly `v`.
std::string FormatDouble(double v);

// Per-env trace directory: header.json (config, layouts, first draw),
// steps.csv (one row per env step), tactile.csv (one row per fingertip per
// step) and episodes.json (one entry per episode, written on Close).
class TraceWriter {
 public:
  // Creates `dir` and writes header.json for an env that was just reset.
  TraceWriter(const std::filesystem::path& dir, const Env& env, const Observation& initial);

  // `step` counts env steps across episodes; `episode` is zero-based.
  void Record(long long step, int episode, std::span<const double> action, const StepResult& result,
              const EnvState& state);
  void Close(const nlohmann::json& episodes);

 private:
  std::filesystem::path dir_;
  std::ofstream steps_;
  std::ofstream tactile_;
  std::string line_;
};

struct EpisodeSummary {
  long long start_step = 0;  // env steps taken before this episode
  int steps = 0;
  double total_reward = 0.0;
  int success_count = 0;
  std::string reason;
  EpisodeDraw draw;

  nlohmann::json ToJson() const;
};

// One episode from Reset until termination or the config step budget.
EpisodeSummary RunEpisode(Env& env, const Policy& policy);

struct EnvRunSummary {
  std::uint64_t index = 0;
  long long steps = 0;
  double total_reward = 0.0;
  int success_count = 0;  // summed over episodes
  std::vector<EpisodeSummary> episodes;
};

// Exactly `total_steps` env steps, resetting whenever an episode ends.
// Episodes draw their parameters from the env's stream in order.
EnvRunSummary RunEnv(Env& env, const Policy& policy, long long total_steps,
                     const std::filesystem::path& trace_dir = {});

struct BatchOptions {
  std::uint64_t seed = 0;
  int n_envs = 1;
  int n_steps = 0;  // env steps per environment; 0: config max_steps
  std::filesystem::path out_dir;  // empty: no files
  int threads = 0;
  std::string policy = "zero";
};

struct BatchSummary {
  std::vector<EnvRunSummary> envs;
  nlohmann::json ToJson(const EnvConfig& config, const BatchOptions& options) const;
};

using PolicyFactory = std::function<Policy(int env_index)>;

BatchSummary RunBatch(const EnvConfig& config, const BatchOptions& options,
                      const PolicyFactory& policies);

}  // namespace taxelsim

#endif  // TAXELSIM_RUNNER_H_
