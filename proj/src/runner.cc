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

#include "taxelsim/runner.h"

#include <charconv>
#include <cstdio>

#include "taxelsim/errors.h"
#include "taxelsim/parallel.h"

namespace taxelsim {

namespace {

constexpr int kTraceSchemaVersion = 1;

std::vector<std::string> RewardTermNames(Task task) {
  if (task == Task::kGrasp) return {"torque", "force", "diff", "outter", "action", "vel", "terminal"};
  return {"close", "bonus", "action"};
}

std::vector<std::string> StepColumns(const Env& env) {
  const EnvConfig& c = env.config();
  const int n = c.hand.num_joints();
  std::vector<std::string> cols{"step", "episode", "episode_step", "reward"};
  for (const auto& t : RewardTermNames(c.task)) cols.push_back("r_" + t);
  for (const char* s : {"terminated", "truncated", "success", "success_count"}) cols.emplace_back(s);
  for (const char* prefix : {"q", "qd", "tau", "action"}) {
    for (int j = 0; j < n; ++j) cols.push_back(std::string(prefix) + std::to_string(j));
  }
  for (const char* s : {"obj_x", "obj_y", "obj_z", "obj_qw", "obj_qx", "obj_qy", "obj_qz", "obj_vx",
                        "obj_vy", "obj_vz", "obj_wx", "obj_wy", "obj_wz"}) {
    cols.emplace_back(s);
  }
  const int obs = ActorLayout(c.task).size();
  for (int i = 0; i < obs; ++i) cols.push_back("obs" + std::to_string(i));
  return cols;
}

std::string Join(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) s += ',';
    s += cols[i];
  }
  return s;
}

void AppendNumber(std::string& line, double v) {
  line += ',';
  line += FormatDouble(v);
}

void AppendInt(std::string& line, long long v) {
  line += ',';
  line += std::to_string(v);
}

std::ofstream OpenOrThrow(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError(file.string() + ": cannot open for writing");
  return out;
}

[[noreturn]] void RethrowWithContext(const std::string& prefix) {
  try {
    throw;
  } catch (const PoisonedStateError& e) {
    throw PoisonedStateError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

TraceWriter::TraceWriter(const std::filesystem::path& dir, const Env& env, const Observation& initial)
    : dir_(dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ": cannot create directory: " + ec.message());
  const EnvConfig& c = env.config();
  nlohmann::json header = {
      {"schema_version", kTraceSchemaVersion},
      {"task", TaskName(c.task)},
      {"seed", env.draw().seed},
      {"stream_index", env.draw().stream_index},
      {"draw", EpisodeDrawToJson(env.draw())},
      {"config", EnvConfigToJson(c)},
      {"actor_layout", ActorLayout(c.task).ToJson()},
      {"critic_layout", CriticLayout(c.task).ToJson()},
      {"step_columns", StepColumns(env)},
      {"initial_observation", {{"actor", initial.actor}, {"critic", initial.critic}}}};
  std::ofstream h = OpenOrThrow(dir / "header.json");
  h << header.dump(2) << '\n';
  steps_ = OpenOrThrow(dir / "steps.csv");
  steps_ << Join(StepColumns(env)) << '\n';
  tactile_ = OpenOrThrow(dir / "tactile.csv");
  tactile_ << "step,finger,force,mu_x,mu_y,mu_z,active_count\n";
}

void TraceWriter::Record(long long step, int episode, std::span<const double> action, const StepResult& r,
                         const EnvState& s) {
  line_ = std::to_string(step);
  AppendInt(line_, episode);
  AppendInt(line_, s.step);
  AppendNumber(line_, r.reward.total);
  for (const auto& [name, value] : r.reward.terms) AppendNumber(line_, value);
  AppendInt(line_, r.terminated);
  AppendInt(line_, r.truncated);
  AppendInt(line_, r.success_event);
  AppendInt(line_, s.success_count);
  for (double v : s.joints.q) AppendNumber(line_, v);
  for (double v : s.joints.qd) AppendNumber(line_, v);
  for (double v : s.applied_torque) AppendNumber(line_, v);
  for (double v : action) AppendNumber(line_, v);
  const Quaternion q = MatrixToQuaternion(s.object_pose.rotation);
  for (int i = 0; i < 3; ++i) AppendNumber(line_, s.object_pose.translation[i]);
  for (double v : {q.w, q.x, q.y, q.z}) AppendNumber(line_, v);
  for (int i = 0; i < 3; ++i) AppendNumber(line_, s.object_velocity[i]);
  for (int i = 0; i < 3; ++i) AppendNumber(line_, s.object_angular_velocity[i]);
  for (double v : r.observation.actor) AppendNumber(line_, v);
  line_ += '\n';
  steps_ << line_;

  for (std::size_t f = 0; f < s.tactile.size(); ++f) {
    const FingertipTactile& t = s.tactile[f];
    line_ = std::to_string(step);
    AppendInt(line_, static_cast<long long>(f));
    AppendNumber(line_, t.total_force);
    for (int i = 0; i < 3; ++i) AppendNumber(line_, t.contact_center[i]);
    AppendInt(line_, t.active_count);
    line_ += '\n';
    tactile_ << line_;
  }
}

void TraceWriter::Close(const nlohmann::json& episodes) {
  steps_.close();
  tactile_.close();
  if (steps_.fail() || tactile_.fail()) throw ConfigError(dir_.string() + ": trace write failed");
  std::ofstream e = OpenOrThrow(dir_ / "episodes.json");
  e << nlohmann::json{{"schema_version", kTraceSchemaVersion}, {"episodes", episodes}}.dump(2) << '\n';
  if (!e) throw ConfigError(dir_.string() + ": trace write failed");
}

nlohmann::json EpisodeSummary::ToJson() const {
  return {{"start_step", start_step},
          {"steps", steps},
          {"total_reward", total_reward},
          {"success_count", success_count},
          {"end_reason", reason},
          {"draw", EpisodeDrawToJson(draw)}};
}

namespace {

// Steps the env until its episode ends or `limit` steps have been taken,
// recording each step. `obs` holds the current observation on entry and
// the latest one on return.
void StepEpisode(Env& env, const Policy& policy, Observation& obs, long long limit, long long& global_step,
                 int episode, EpisodeSummary& summary, TraceWriter* writer) {
  const std::uint64_t index = env.draw().stream_index;
  while (!env.state().done && (limit < 0 || summary.steps < limit)) {
    const std::string prefix = "env " + std::to_string(index) + " step " + std::to_string(global_step + 1) + ": ";
    std::vector<double> action;
    try {
      action = policy(obs, env);
    } catch (...) {
      RethrowWithContext(prefix + "policy: ");
    }
    StepResult r;
    try {
      r = env.Step(action);
    } catch (...) {
      RethrowWithContext(prefix);
    }
    ++global_step;
    ++summary.steps;
    summary.total_reward += r.reward.total;
    summary.reason = r.reason;
    if (writer) writer->Record(global_step, episode, action, r, env.state());
    obs = std::move(r.observation);
  }
  summary.success_count = env.state().success_count;
}

Observation ResetWithContext(Env& env, long long global_step) {
  try {
    return env.Reset();
  } catch (...) {
    RethrowWithContext("env " + std::to_string(env.draw().stream_index) + " reset at step " +
                       std::to_string(global_step) + ": ");
  }
}

}  // namespace

EpisodeSummary RunEpisode(Env& env, const Policy& policy) {
  Observation obs = ResetWithContext(env, 0);
  EpisodeSummary summary;
  summary.draw = env.draw();
  long long step = 0;
  StepEpisode(env, policy, obs, -1, step, 0, summary, nullptr);
  return summary;
}

EnvRunSummary RunEnv(Env& env, const Policy& policy, long long total_steps,
                     const std::filesystem::path& trace_dir) {
  if (total_steps < 1) throw ConfigError("steps per environment must be >= 1");
  EnvRunSummary run;
  long long step = 0;
  Observation obs = ResetWithContext(env, step);
  run.index = env.draw().stream_index;
  std::unique_ptr<TraceWriter> writer;
  if (!trace_dir.empty()) writer = std::make_unique<TraceWriter>(trace_dir, env, obs);
  while (step < total_steps) {
    if (!run.episodes.empty()) obs = ResetWithContext(env, step);
    EpisodeSummary e;
    e.start_step = step;
    e.draw = env.draw();
    StepEpisode(env, policy, obs, total_steps - step, step, static_cast<int>(run.episodes.size()), e,
                writer.get());
    if (!env.state().done) e.reason = "limit";
    run.total_reward += e.total_reward;
    run.success_count += e.success_count;
    run.episodes.push_back(std::move(e));
  }
  run.steps = step;
  if (writer) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : run.episodes) list.push_back(e.ToJson());
    writer->Close(list);
  }
  return run;
}

nlohmann::json BatchSummary::ToJson(const EnvConfig& config, const BatchOptions& o) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : envs) {
    nlohmann::json reasons = nlohmann::json::array();
    for (const auto& ep : e.episodes) reasons.push_back(ep.reason);
    list.push_back({{"index", e.index},
                    {"steps", e.steps},
                    {"episodes", e.episodes.size()},
                    {"total_reward", e.total_reward},
                    {"success_count", e.success_count},
                    {"end_reasons", reasons}});
  }
  return {{"schema_version", kTraceSchemaVersion},
          {"task", TaskName(config.task)},
          {"seed", o.seed},
          {"n_envs", o.n_envs},
          {"n_steps", o.n_steps > 0 ? o.n_steps : config.max_steps},
          {"policy", o.policy},
          {"envs", list}};
}

BatchSummary RunBatch(const EnvConfig& config, const BatchOptions& options,
                      const PolicyFactory& policies) {
  if (options.n_envs < 1) throw ConfigError("n_envs must be >= 1");
  if (options.n_steps < 0) throw ConfigError("n_steps must be >= 1");
  auto shared = std::make_shared<const EnvConfig>(config);
  const long long steps = options.n_steps > 0 ? options.n_steps : config.max_steps;

  if (!options.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw ConfigError(options.out_dir.string() + ": cannot create directory: " + ec.message());
  }
  BatchSummary summary;
  summary.envs.resize(static_cast<std::size_t>(options.n_envs));
  ParallelFor(static_cast<std::size_t>(options.n_envs), WorkerCount(options.threads), [&](std::size_t i) {
    Env env(shared, options.seed, i);
    std::filesystem::path dir;
    if (!options.out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "env_%04zu", i);
      dir = options.out_dir / name;
    }
    summary.envs[i] = RunEnv(env, policies(static_cast<int>(i)), steps, dir);
  });
  if (!options.out_dir.empty()) {
    std::ofstream out = OpenOrThrow(options.out_dir / "summary.json");
    out << summary.ToJson(*shared, options).dump(2) << '\n';
  }
  return summary;
}

}  // namespace taxelsim
