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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0
// only when every criterion passes.
//
//   taxelsim_acceptance <path-to-taxelsim-binary> [--quick]
//
// --quick shrinks the determinism run for local iteration; the full run
// uses 512 environments x 200 steps.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reward_scenarios.h"
#include "taxelsim/actuator.h"
#include "taxelsim/calibration.h"
#include "taxelsim/diagnostics.h"
#include "taxelsim/env.h"
#include "taxelsim/observation.h"
#include "taxelsim/oracle.h"
#include "taxelsim/rotation.h"
#include "taxelsim/tactile.h"
#include "test_support.h"

namespace {

namespace fs = std::filesystem;
using namespace taxelsim;
using taxelsim::testing::Gen;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. detect_contact against the dense-sampling containment oracle.
Verdict ContactOracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int cases = 0, agree = 0;
  double worst = 0.0;
  std::uint64_t seed = 1000;
  for (const auto& [label, shape] : ReferenceShapes()) {
    const ContactOracleStats s = CompareContactOracle(shape, 250, seed++, false);
    cases += s.cases;
    agree += s.agreements;
    worst = std::max(worst, s.max_disagreement_distance);
  }
  const double secs = Seconds(t0);
  return {cases == 1000 && agree >= 999 && worst <= 1e-4 && secs < 60.0,
          std::to_string(agree) + "/" + std::to_string(cases) + " agree" +
              Fmt(", worst disagreement %.3g m, %.2f s", worst, secs)};
}

// 2. The contact centre does not depend on stiffness.
Verdict KCancellation() {
  Gen g(2);
  int scenes = 0;
  double worst = 0.0;
  while (scenes < 1000) {
    ObjectShape shape;
    switch (g.Int(0, 2)) {
      case 0: shape = ObjectShape::MakeSphere(g.Uniform(0.01, 0.05)); break;
      case 1: shape = ObjectShape::MakeBox(Vec3(g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04))); break;
      default: shape = ObjectShape::MakeCylinder(g.Uniform(0.01, 0.04), g.Uniform(0.01, 0.04)); break;
    }
    const Transform pose = g.Pose(0.1);
    std::vector<Vec3> taxels;
    for (int j = 0, n = g.Int(1, 40); j < n; ++j) taxels.push_back(pose.translation + g.Box(0.05));
    ContactMaterial soft, hard;
    soft.stiffness = 1.0;
    hard.stiffness = 500.0;
    const auto a = SenseFingertip(taxels, shape, pose, soft, Vec3::Zero());
    const auto b = SenseFingertip(taxels, shape, pose, hard, Vec3::Zero());
    if (a.active_count == 0) continue;
    ++scenes;
    // Depth-weighted reference, summed here from the per-taxel depths.
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const auto& r : a.readings) {
      if (!r.active) continue;
      num += r.depth * r.position;
      den += r.depth;
    }
    const Vec3 mu_sim = num / den;
    worst = std::max({worst, (a.contact_center - mu_sim).cwiseAbs().maxCoeff(),
                      (b.contact_center - mu_sim).cwiseAbs().maxCoeff()});
  }
  return {worst <= 1e-12, Fmt("1000 scenes, max |mu_k - mu_sim| = %.3g", worst)};
}

// 3. Actuator envelope, deadband and speed floor.
Verdict ActuatorEnvelope() {
  Gen g(3);
  int envelope = 0, deadband = 0, floor = 0, deadband_cases = 0, floor_cases = 0;
  for (int i = 0; i < 100000; ++i) {
    ActuatorParams p;
    p.kp = g.Uniform(0.1, 20.0);
    p.kd = g.Uniform(0.0, 1.0);
    p.backlash = g.Uniform(0.0, 0.05);
    p.stall_torque = g.Uniform(0.05, 3.0);
    p.no_load_speed = g.Uniform(0.5, 30.0);
    p.efficiency = g.Uniform(1e-3, 1.0);
    const double q_ref = g.Uniform(-2, 2);
    const double q_m = i % 4 == 0 ? q_ref + g.Uniform(-1, 1) * p.backlash : g.Uniform(-2, 2);
    const double qd_m = g.Uniform(-40, 40);
    const double tau = StepActuator(p, q_ref, q_m, g.Uniform(-20, 20), qd_m);
    envelope += std::abs(tau) > p.efficiency * p.stall_torque + 1e-12;
    if (std::abs(q_ref - q_m) < p.backlash) {
      ++deadband_cases;
      deadband += tau != 0.0;
    }
    if (std::abs(qd_m) >= p.no_load_speed) {
      ++floor_cases;
      floor += tau != 0.0;
    }
  }
  return {envelope == 0 && deadband == 0 && floor == 0 && deadband_cases > 0 && floor_cases > 0,
          "1e5 samples: " + std::to_string(envelope) + " envelope, " + std::to_string(deadband) + "/" +
              std::to_string(deadband_cases) + " deadband, " + std::to_string(floor) + "/" +
              std::to_string(floor_cases) + " speed-floor violations"};
}

// 4. 6D encoding: round trip, double cover, continuity where quaternions jump.
Verdict SixD() {
  Gen g(4);
  double round_trip = 0.0;
  int cover_mismatch = 0;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Quaterniond e = g.EigenQuaternion();
    const Quaternion q{e.w(), e.x(), e.y(), e.z()};
    const Mat3 r = QuaternionToMatrix(q);
    round_trip = std::max(round_trip, testing::MaxAbs(Decode6D(Encode6D(r)) - r));
    cover_mismatch += Encode6D(r).ToArray() != Encode6D(QuaternionToMatrix(-q)).ToArray();
  }
  double six_jump = 0.0, quat_jump = std::numeric_limits<double>::infinity(), pair_distance = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 axis = g.UnitVector();
    const double delta = g.Uniform(1e-6, 4.9e-4);
    const Mat3 a = AxisAngle(axis, std::numbers::pi - delta);
    const Mat3 b = AxisAngle(axis, std::numbers::pi + delta);
    pair_distance = std::max(pair_distance, RotationDistance(a, b));
    six_jump = std::max(six_jump, Encode6D(a).MaxAbsDifference(Encode6D(b)));
    quat_jump = std::min(quat_jump, MatrixToQuaternion(a).MaxAbsDifference(MatrixToQuaternion(b)));
  }
  return {round_trip < 1e-9 && cover_mismatch == 0 && pair_distance < 1e-3 && six_jump < 1e-2 && quat_jump > 0.5,
          Fmt("round trip %.3g, ", round_trip) + std::to_string(cover_mismatch) +
              Fmt(" double-cover mismatches, near-pi pairs: 6D jump %.3g, min quaternion jump %.3g", six_jump,
                  quat_jump)};
}

// 5. Calibration fits, proxy identity and noisy recovery.
Verdict Calibration() {
  Gen g(5);
  double slope_err = 0.0, proxy_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = g.Uniform(0.5, 10.0), beta = g.Uniform(0.5, 10.0);
    std::vector<DomainSample> data;
    for (int i = 0; i < 40; ++i) {
      const double f = g.Uniform(0.1, 20.0);
      data.push_back({{f / alpha, f, 0}, CalibrationDomain::kReal});
      data.push_back({{f / beta, f, 0}, CalibrationDomain::kSim});
    }
    const CalibrationMap map = CalibrationMap::Fit(data);
    const JointCalibration& jc = map.For(0);
    slope_err = std::max({slope_err, std::abs(jc.real->alpha - alpha) / alpha, std::abs(jc.sim->beta - beta) / beta});
    for (const auto& d : data) {
      const double proxy = d.domain == CalibrationDomain::kReal ? map.NormalizeCurrent(d.sample.drive_signal, 0)
                                                                : map.NormalizeTorque(d.sample.drive_signal, 0);
      const double f_max = d.domain == CalibrationDomain::kReal ? jc.real->f_max : jc.sim->f_max;
      proxy_err = std::max(proxy_err, std::abs(proxy - d.sample.contact_force / f_max));
    }
  }
  constexpr int kN = 400;
  constexpr double kSigma = 0.05;
  int inside = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double slope = g.Uniform(0.5, 5.0);
    std::vector<CalibrationSample> s;
    for (int i = 0; i < kN; ++i) {
      const double x = g.Uniform(1.0, 3.0);
      s.push_back({x, slope * x + g.Normal(kSigma), 0});
    }
    inside += std::abs(FitLinear(s).slope - slope) < 3.0 * kSigma / std::sqrt(kN);
  }
  return {slope_err <= 1e-12 && proxy_err <= 1e-12 && inside == 100,
          Fmt("slope rel. error %.3g, proxy error %.3g, ", slope_err, proxy_err) + std::to_string(inside) +
              "/100 noisy fits within 3 sigma/sqrt(N)"};
}

// 6. Hand-computed reward scenarios.
Verdict Rewards() {
  const auto table = testing::ScenarioTable();
  int bad = 0;
  double worst = 0.0;
  std::string first;
  for (const auto& c : table) {
    const double err = std::abs(c.value() - c.expected);
    worst = std::max(worst, err);
    if (err > 1e-9) {
      if (first.empty()) first = c.name;
      ++bad;
    }
  }
  return {table.size() >= 20 && bad == 0,
          std::to_string(table.size()) + " scenarios, " + std::to_string(bad) + Fmt(" off, max error %.3g", worst) +
              (first.empty() ? "" : " (first: " + first + ")")};
}

// 7. Observation widths against the row sums of the observation tables.
Verdict Observations() {
  const int grasp = 12 + 12 + 3 + 3 + 5 + 15 + 15 + 1;
  const int actor = 12 + 6 + 12 + 15 + 5 + 15;
  const int critic = actor + 6 + 30 + 30 + 12 + 3 + 3;
  Env g(std::make_shared<const EnvConfig>(DefaultEnvConfig(Task::kGrasp)), 0, 0);
  Env r(std::make_shared<const EnvConfig>(DefaultEnvConfig(Task::kRotate)), 0, 0);
  const Observation og = g.Reset(), ro = r.Reset();
  const bool ok = grasp == 66 && actor == 65 && critic == 149 && GraspLayout().size() == grasp &&
                  RotateActorLayout().size() == actor && RotateCriticLayout().size() == critic &&
                  og.actor.size() == 66u && og.critic.size() == 66u && ro.actor.size() == 65u &&
                  ro.critic.size() == 149u;
  return {ok, "grasp " + std::to_string(og.actor.size()) + ", rotate actor " + std::to_string(ro.actor.size()) +
                  ", rotate critic " + std::to_string(ro.critic.size())};
}

int RunCommand(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8. Byte-identical traces from two identical simulate runs.
Verdict Determinism(const std::string& cli, bool quick) {
  const int envs = quick ? 32 : 512;
  const fs::path root = fs::temp_directory_path() / "taxelsim_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  double slowest = 0.0;
  int codes[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = root / (run == 0 ? "a" : "b");
    const auto t0 = std::chrono::steady_clock::now();
    codes[run] = RunCommand(cli + " simulate --task grasp --policy scripted-close --seed 42 --envs " +
                            std::to_string(envs) + " --steps 200 --out " + out.string() + " > " +
                            (root / (run == 0 ? "a.json" : "b.json")).string());
    slowest = std::max(slowest, Seconds(t0));
  }
  std::size_t files = 0, mismatched = 0;
  std::uintmax_t bytes = 0;
  if (codes[0] == 0 && codes[1] == 0) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
      if (!entry.is_regular_file()) continue;
      const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
      ++files;
      bytes += entry.file_size();
      mismatched += !fs::exists(other) || Slurp(entry.path()) != Slurp(other);
    }
    mismatched += Slurp(root / "a.json") != Slurp(root / "b.json");
  }
  fs::remove_all(root);
  const bool ok = codes[0] == 0 && codes[1] == 0 && files == static_cast<std::size_t>(envs) * 4 + 1 &&
                  mismatched == 0 && slowest < 300.0;
  return {ok, std::to_string(envs) + " envs x 200 steps: " + std::to_string(files) + " files, " +
                  Fmt("%.0f MB, ", bytes / 1e6) + std::to_string(mismatched) +
                  Fmt(" differ, slowest run %.1f s", slowest)};
}

// 9. Free fall, passive energy, shifting-goal closure.
Verdict Physics() {
  // Free fall with contacts disabled.
  EnvConfig fall = DefaultEnvConfig(Task::kGrasp);
  fall.physics.contacts = false;
  fall.object.damping = 0.0;
  fall.randomization.damping.reset();
  double momentum_err = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Env env(std::make_shared<const EnvConfig>(fall), 9, i);
    env.Reset();
    for (int step = 0; step < 8; ++step) {
      const Vec3 v0 = env.state().object_velocity;
      const StepResult r = env.Step(env.state().joints.q);
      const Vec3 dp = env.object_mass() * (env.state().object_velocity - v0);
      momentum_err = std::max(momentum_err, (dp - env.object_mass() * fall.physics.control_dt * fall.physics.gravity)
                                                .cwiseAbs()
                                                .maxCoeff());
      if (r.terminated) break;
    }
  }

  // Passive contact, no gravity, no restitution, hand held still.
  EnvConfig passive = DefaultEnvConfig(Task::kRotate);
  passive.physics.gravity = Vec3::Zero();
  passive.object.restitution = 0.0;
  passive.randomization.restitution = Interval{0.0, 0.0};
  passive.object.damping = 0.0;
  passive.randomization.damping.reset();
  passive.max_steps = 120;
  const auto passive_cfg = std::make_shared<const EnvConfig>(passive);
  Gen g(9);
  double energy_rise = 0.0;
  long long contact_steps = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Env env(passive_cfg, 900 + trial, 0);
    env.Reset();
    env.mutable_state().object_velocity = 0.3 * g.UnitVector();
    env.mutable_state().object_angular_velocity = 3.0 * g.UnitVector();
    double prev = env.object_kinetic_energy();
    for (int step = 0; step < passive.max_steps; ++step) {
      const StepResult r = env.Step(env.state().joints.q);
      const double ke = env.object_kinetic_energy();
      energy_rise = std::max(energy_rise, ke - prev);
      for (const auto& t : env.state().tactile) contact_steps += t.active_count > 0;
      prev = ke;
      if (r.terminated || r.truncated) break;
    }
  }

  // Four successes bring the goal back to where it started.
  EnvConfig rot = DefaultEnvConfig(Task::kRotate);
  rot.physics.gravity = Vec3::Zero();
  Env env(std::make_shared<const EnvConfig>(rot), 5, 0);
  env.Reset();
  const Mat3 initial = env.state().initial_goal;
  double shift_err = 0.0;
  int successes = 0;
  for (int step = 0; step < 20 && successes < 4; ++step) {
    EnvState& s = env.mutable_state();
    s.object_pose.rotation = s.goal;
    s.object_pose.translation = s.reference_position;
    s.object_velocity = Vec3::Zero();
    s.object_angular_velocity = Vec3::Zero();
    const StepResult r = env.Step(env.state().joints.q);
    if (r.terminated) break;
    if (!r.success_event) continue;
    ++successes;
    const Mat3 expected = AxisAngle(rot.rotate.axis.normalized(), successes * std::numbers::pi / 2) * initial;
    shift_err = std::max(shift_err, testing::MaxAbs(env.state().goal - expected));
  }
  const double closure = testing::MaxAbs(env.state().goal - initial);

  const bool ok = momentum_err <= 1e-9 && energy_rise <= 1e-6 && contact_steps > 0 && successes == 4 &&
                  shift_err <= 1e-9 && closure <= 1e-9;
  return {ok, Fmt("momentum error %.3g, max KE rise %.3g J", momentum_err, energy_rise) + " over " +
                  std::to_string(contact_steps) + " contact finger-steps, " + std::to_string(successes) +
                  Fmt(" successes, goal closure %.3g", closure)};
}

// 10. Single-core nearest-surface throughput on primitives.
Verdict Throughput(const std::string& cli) {
  const fs::path out = fs::temp_directory_path() / "taxelsim_acceptance_bench.json";
  const int code = RunCommand(cli + " bench-tactile --envs 64 --steps 100 --shape all --out " + out.string() +
                              " 2> /dev/null");
  if (code != 0) return {false, "bench-tactile exited " + std::to_string(code)};
  const nlohmann::json report = nlohmann::json::parse(Slurp(out));
  fs::remove(out);
  std::string per_shape;
  for (const auto& r : report["results"]) {
    per_shape += (per_shape.empty() ? "" : ", ") + r["shape"].get<std::string>() +
                 Fmt(" %.3g", r["queries_per_second"].get<double>());
  }
  const double floor = report["min_primitive_queries_per_second"].get<double>();
  return {floor >= 5e6, Fmt("min primitive %.3g q/s (", floor) + per_shape + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <taxelsim binary> [--quick]\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const bool quick = argc > 2 && std::string(argv[2]) == "--quick";
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"contact rule vs containment oracle", ContactOracle},
      {"stiffness cancels from contact centre", KCancellation},
      {"actuator envelope and deadband", ActuatorEnvelope},
      {"6D rotation encoding", SixD},
      {"current/torque calibration", Calibration},
      {"reward scenario table", Rewards},
      {"observation dimensions", Observations},
      {"byte-identical simulate traces", [&] { return Determinism(cli, quick); }},
      {"physics sanity", Physics},
      {"tactile query throughput", [&] { return Throughput(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
