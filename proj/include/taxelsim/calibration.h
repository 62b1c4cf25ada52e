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

// Current-to-torque calibration.
//
// The real hand reports motor current, the simulator reports joint torque.
// Both are linear in fingertip contact force under quasi-static loading,
//   F_real ~ alpha * I_real,    F_sim ~ beta * tau_sim,
// so normalizing each by its observed maximum gives the same dimensionless
// force proxy in [0, 1]:
//   I_norm = I_real / I_max,    tau_norm = tau_sim / tau_max.
// A policy trained on tau_norm can then be fed I_norm on hardware.

#ifndef TAXELSIM_CALIBRATION_H_
#define TAXELSIM_CALIBRATION_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace taxelsim {

struct CalibrationSample {
  double drive_signal = 0.0;   // motor current (real) or joint torque (sim)
  double contact_force = 0.0;  // sensor units
  int joint_id = 0;
};

enum class CalibrationDomain { kReal, kSim };

struct DomainSample {
  CalibrationSample sample;
  CalibrationDomain domain = CalibrationDomain::kReal;
};

struct LinearFit {
  double slope = 0.0;
  double rms_residual = 0.0;
  std::size_t count = 0;
};

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

// Through-origin least squares: slope = sum(s F) / sum(s^2). Throws
// DegenerateFitError with fewer than two distinct drive signals.
LinearFit FitLinear(std::span<const CalibrationSample> samples);
// Ordinary least squares with intercept, for exploring data only.
AffineFit FitAffine(std::span<const CalibrationSample> samples);

struct RealCalibration {
  double alpha = 0.0;
  double i_max = 0.0;
  double f_max = 0.0;
  double rms = 0.0;
};

struct SimCalibration {
  double beta = 0.0;
  double tau_max = 0.0;
  double f_max = 0.0;
  double rms = 0.0;
};

struct JointCalibration {
  std::optional<RealCalibration> real;
  std::optional<SimCalibration> sim;
};

class CalibrationMap {
 public:
  CalibrationMap() = default;

  // Per-joint fits, or a single pooled fit applied to every joint when
  // `shared` is set.
  static CalibrationMap Fit(std::span<const DomainSample> samples, bool shared = false);
  // Every joint normalizes torque by `tau_max` (used when no calibration
  // file is configured).
  static CalibrationMap SharedTorqueScale(double tau_max);

  bool shared() const { return shared_; }
  const std::map<int, JointCalibration>& joints() const { return joints_; }
  // Throws ConfigError if the joint has no entry (and the map is not shared).
  const JointCalibration& For(int joint_id) const;

  // clamp(I / I_max, 0, 1). Throws ConfigError if the joint lacks a real fit.
  double NormalizeCurrent(double current, int joint_id) const;
  // clamp(tau / tau_max, 0, 1). Throws ConfigError if the joint lacks a sim fit.
  double NormalizeTorque(double torque, int joint_id) const;

  nlohmann::json ToJson() const;
  static CalibrationMap FromJson(const nlohmann::json& j);
  static CalibrationMap Load(const std::filesystem::path& file);

 private:
  bool shared_ = false;
  std::map<int, JointCalibration> joints_;  // key -1 holds the shared entry
};

// CSV with header joint_id,drive_signal,contact_force,domain where domain is
// "real" or "sim". Throws ConfigError on malformed rows or no data rows.
std::vector<DomainSample> ReadCalibrationCsv(std::istream& in, const std::string& source = "<stream>");
std::vector<DomainSample> ReadCalibrationCsv(const std::filesystem::path& file);

}  // namespace taxelsim

#endif  // TAXELSIM_CALIBRATION_H_
