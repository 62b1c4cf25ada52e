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

// taxelsim: simulate, calibrate, bench-tactile and validate.
//
// Exit codes: 0 success, 1 failed validation or internal error, 2 bad
// configuration or arguments, 3 non-finite simulation state.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "taxelsim/calibration.h"
#include "taxelsim/diagnostics.h"
#include "taxelsim/env_config.h"
#include "taxelsim/errors.h"
#include "taxelsim/policy.h"
#include "taxelsim/runner.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPoisoned = 3;
constexpr int kReportSchemaVersion = 1;

void WriteJson(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw taxelsim::ConfigError(out + ": cannot open for writing");
  f << doc.dump(2) << '\n';
  if (!f) throw taxelsim::ConfigError(out + ": write failed");
}

struct SimulateArgs {
  std::string config;
  std::string task = "grasp";
  std::uint64_t seed = 0;
  int envs = 1;
  int steps = 0;
  std::string policy = "zero";
  std::string out;
  int threads = 0;
};

int Simulate(const SimulateArgs& a) {
  const taxelsim::EnvConfig config = a.config.empty()
                                         ? taxelsim::DefaultEnvConfig(taxelsim::ParseTask(a.task))
                                         : taxelsim::LoadEnvConfig(a.config);
  taxelsim::BatchOptions options;
  options.seed = a.seed;
  options.n_envs = a.envs;
  options.n_steps = a.steps;
  options.out_dir = a.out;
  options.threads = a.threads;
  options.policy = a.policy;

  const bool external = a.policy == "external-stdin";
  if (external && a.envs != 1) throw taxelsim::ConfigError("external-stdin policy requires --envs 1");
  taxelsim::PolicyFactory factory;
  if (external) {
    factory = [](int) { return taxelsim::MakeStreamPolicy(std::cin, std::cout); };
  } else {
    taxelsim::MakePolicy(a.policy);  // rejects unknown names before any env starts
    factory = [name = a.policy](int) { return taxelsim::MakePolicy(name); };
  }
  const taxelsim::BatchSummary summary = taxelsim::RunBatch(config, options, factory);
  // stdout carries the observation stream in external mode.
  (external ? std::cerr : std::cout) << summary.ToJson(config, options).dump(2) << '\n';
  return kExitOk;
}

int Calibrate(const std::string& csv, bool shared, const std::string& out) {
  const auto samples = taxelsim::ReadCalibrationCsv(fs::path(csv));
  const auto map = taxelsim::CalibrationMap::Fit(samples, shared);
  std::fprintf(stderr, "%-8s %-6s %14s %14s %14s\n", "joint", "domain", "slope", "max", "rms");
  for (const auto& [id, jc] : map.joints()) {
    const std::string name = id < 0 ? "shared" : std::to_string(id);
    if (jc.real) {
      std::fprintf(stderr, "%-8s %-6s %14.8g %14.8g %14.6g\n", name.c_str(), "real", jc.real->alpha,
                   jc.real->i_max, jc.real->rms);
    }
    if (jc.sim) {
      std::fprintf(stderr, "%-8s %-6s %14.8g %14.8g %14.6g\n", name.c_str(), "sim", jc.sim->beta,
                   jc.sim->tau_max, jc.sim->rms);
    }
  }
  WriteJson(map.ToJson(), out);
  return kExitOk;
}

int BenchTactile(int envs, int steps, const std::string& shape_name, std::uint64_t seed,
                 const std::string& out) {
  if (envs < 1 || steps < 1) throw taxelsim::ConfigError("--envs and --steps must be >= 1");
  const taxelsim::HandModel hand = taxelsim::CanonicalHandModel();
  json results = json::array();
  long long total = 0;
  double min_primitive = -1.0;
  bool matched = false;
  for (const auto& [label, shape] : taxelsim::ReferenceShapes()) {
    if (shape_name != "all" && shape_name != label) continue;
    matched = true;
    const auto r = taxelsim::BenchTactile(label, shape, hand, envs, steps, seed);
    total += r.queries;
    results.push_back({{"shape", r.shape},
                       {"queries", r.queries},
                       {"seconds", r.seconds},
                       {"queries_per_second", r.queries_per_second},
                       {"active_taxels", r.active_taxels}});
    if (label != "convex_mesh" && (min_primitive < 0.0 || r.queries_per_second < min_primitive)) {
      min_primitive = r.queries_per_second;
    }
    std::fprintf(stderr, "%-12s %12lld queries %10.4f s %14.0f q/s\n", label.c_str(), r.queries, r.seconds,
                 r.queries_per_second);
  }
  if (!matched) throw taxelsim::ConfigError("--shape must be all, sphere, box, cylinder or convex_mesh");
  json report = {{"schema_version", kReportSchemaVersion},
                 {"n_envs", envs},
                 {"n_steps", steps},
                 {"taxels_per_hand", hand.num_taxels()},
                 {"seed", seed},
                 {"threads", 1},
                 {"total_queries", total},
                 {"results", results}};
  if (min_primitive >= 0.0) report["min_primitive_queries_per_second"] = min_primitive;
  WriteJson(report, out);
  return kExitOk;
}

int Validate(const std::string& config_path, const std::string& hand_path, int samples, std::uint64_t seed,
             const std::string& out) {
  if (samples < 1) throw taxelsim::ConfigError("--samples must be >= 1");
  taxelsim::HandModel hand = taxelsim::CanonicalHandModel();
  taxelsim::ContactMaterial material;
  auto shapes = taxelsim::ReferenceShapes();
  if (!config_path.empty()) {
    const auto config = taxelsim::LoadEnvConfig(config_path);
    hand = config.hand;
    material = config.material;
    shapes.insert(shapes.begin(), {"config/" + config.shape.type_name(), config.shape});
  }
  // Structural checks only: a fixture with a corrupted normal should reach
  // the normal check and be reported, not rejected while loading.
  if (!hand_path.empty()) hand = taxelsim::LoadHandModel(hand_path, false);
  const auto report = taxelsim::RunValidation(hand, shapes, material, samples, seed);
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "%s %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  WriteJson(report.ToJson(), out);
  return report.passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile hand simulation toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded episodes and write traces");
  simulate->add_option("--config", sim.config, "Episode config JSON (default: built-in config for --task)");
  simulate->add_option("--task", sim.task, "grasp or rotate, used without --config");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--envs", sim.envs, "Number of environments")->check(CLI::PositiveNumber);
  simulate->add_option("--steps", sim.steps, "Steps per episode (default: config max_steps)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--policy", sim.policy, "zero, scripted-close, scripted-rotate or external-stdin");
  simulate->add_option("--out", sim.out, "Trace directory (default: no trace files)");
  simulate->add_option("--threads", sim.threads, "Worker threads (default: hardware, capped by TAXELSIM_THREADS)");

  std::string csv, calib_out;
  bool shared = false;
  auto* calibrate = app.add_subcommand("calibrate", "Fit current and torque calibration from CSV");
  calibrate->add_option("csv", csv, "joint_id,drive_signal,contact_force,domain")->required();
  calibrate->add_flag("--shared", shared, "Pool all joints into one map");
  calibrate->add_option("--out", calib_out, "Output JSON (default: stdout)");

  int bench_envs = 64, bench_steps = 100;
  std::string bench_shape = "all", bench_out;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench-tactile", "Time taxel nearest-surface queries on one core");
  bench->add_option("--envs", bench_envs, "Hands per step");
  bench->add_option("--steps", bench_steps, "Steps per hand");
  bench->add_option("--shape", bench_shape, "all, sphere, box, cylinder or convex_mesh");
  bench->add_option("--seed", bench_seed, "Seed for joint configurations");
  bench->add_option("--out", bench_out, "Output JSON (default: stdout)");

  std::string val_config, val_hand, val_out;
  int val_samples = 1000;
  std::uint64_t val_seed = 0;
  auto* validate = app.add_subcommand("validate", "Check contact math against the brute-force oracles");
  validate->add_option("--config", val_config, "Episode config whose hand, object and material are added");
  validate->add_option("--hand", val_hand, "Hand model JSON to check instead");
  validate->add_option("--samples", val_samples, "Oracle cases per shape");
  validate->add_option("--seed", val_seed, "Seed");
  validate->add_option("--out", val_out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return Simulate(sim);
    if (*calibrate) return Calibrate(csv, shared, calib_out);
    if (*bench) return BenchTactile(bench_envs, bench_steps, bench_shape, bench_seed, bench_out);
    if (*validate) return Validate(val_config, val_hand, val_samples, val_seed, val_out);
  } catch (const taxelsim::PoisonedStateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPoisoned;
  } catch (const taxelsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const taxelsim::DegenerateFitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitFailed;
}
