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

#include "taxelsim/calibration.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "taxelsim/errors.h"
#include "taxelsim/json_util.h"

namespace taxelsim {

namespace ju = json_util;

namespace {

constexpr int kSharedKey = -1;

void RequireDistinctSignals(std::span<const CalibrationSample> samples) {
  if (samples.size() < 2) throw DegenerateFitError("fit needs at least two samples");
  const double first = samples.front().drive_signal;
  const bool distinct = std::any_of(samples.begin(), samples.end(),
                                    [&](const CalibrationSample& s) { return s.drive_signal != first; });
  if (!distinct) throw DegenerateFitError("fit needs at least two distinct drive signals");
}

double Positive(const ju::Json& j, const char* key, const std::string& path) {
  const double v = ju::Number(ju::Require(j, key, path), ju::Child(path, key));
  if (!(v > 0.0)) ju::Fail(ju::Child(path, key), "must be positive");
  return v;
}

}  // namespace

LinearFit FitLinear(std::span<const CalibrationSample> samples) {
  RequireDistinctSignals(samples);
  double sf = 0.0, ss = 0.0;
  for (const auto& s : samples) {
    sf += s.drive_signal * s.contact_force;
    ss += s.drive_signal * s.drive_signal;
  }
  LinearFit fit;
  fit.slope = sf / ss;
  fit.count = samples.size();
  double sq = 0.0;
  for (const auto& s : samples) {
    const double r = s.contact_force - fit.slope * s.drive_signal;
    sq += r * r;
  }
  fit.rms_residual = std::sqrt(sq / static_cast<double>(samples.size()));
  return fit;
}

AffineFit FitAffine(std::span<const CalibrationSample> samples) {
  RequireDistinctSignals(samples);
  const double n = static_cast<double>(samples.size());
  double ms = 0.0, mf = 0.0;
  for (const auto& s : samples) {
    ms += s.drive_signal;
    mf += s.contact_force;
  }
  ms /= n;
  mf /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& s : samples) {
    sxy += (s.drive_signal - ms) * (s.contact_force - mf);
    sxx += (s.drive_signal - ms) * (s.drive_signal - ms);
  }
  AffineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mf - fit.slope * ms;
  double sq = 0.0;
  for (const auto& s : samples) {
    const double r = s.contact_force - (fit.slope * s.drive_signal + fit.intercept);
    sq += r * r;
  }
  fit.rms_residual = std::sqrt(sq / n);
  return fit;
}

CalibrationMap CalibrationMap::Fit(std::span<const DomainSample> samples, bool shared) {
  std::map<int, std::vector<CalibrationSample>> real, sim;
  for (const auto& ds : samples) {
    const int key = shared ? kSharedKey : ds.sample.joint_id;
    (ds.domain == CalibrationDomain::kReal ? real : sim)[key].push_back(ds.sample);
  }
  CalibrationMap map;
  map.shared_ = shared;
  auto maxima = [](const std::vector<CalibrationSample>& v, double* drive, double* force) {
    *drive = 0.0;
    *force = 0.0;
    for (const auto& s : v) {
      *drive = std::max(*drive, s.drive_signal);
      *force = std::max(*force, s.contact_force);
    }
  };
  for (const auto& [joint, data] : real) {
    const LinearFit fit = FitLinear(data);
    RealCalibration c;
    c.alpha = fit.slope;
    c.rms = fit.rms_residual;
    maxima(data, &c.i_max, &c.f_max);
    if (!(c.alpha > 0.0) || !(c.i_max > 0.0) || !(c.f_max > 0.0)) {
      throw DegenerateFitError("joint " + std::to_string(joint) + ": real fit has non-positive slope or maxima");
    }
    map.joints_[joint].real = c;
  }
  for (const auto& [joint, data] : sim) {
    const LinearFit fit = FitLinear(data);
    SimCalibration c;
    c.beta = fit.slope;
    c.rms = fit.rms_residual;
    maxima(data, &c.tau_max, &c.f_max);
    if (!(c.beta > 0.0) || !(c.tau_max > 0.0) || !(c.f_max > 0.0)) {
      throw DegenerateFitError("joint " + std::to_string(joint) + ": sim fit has non-positive slope or maxima");
    }
    map.joints_[joint].sim = c;
  }
  return map;
}

CalibrationMap CalibrationMap::SharedTorqueScale(double tau_max) {
  if (!(tau_max > 0.0)) throw ConfigError("tau_max must be positive");
  CalibrationMap map;
  map.shared_ = true;
  map.joints_[kSharedKey].sim = SimCalibration{1.0, tau_max, tau_max, 0.0};
  return map;
}

const JointCalibration& CalibrationMap::For(int joint_id) const {
  auto it = joints_.find(shared_ ? kSharedKey : joint_id);
  if (it == joints_.end()) {
    throw ConfigError("calibration: no entry for joint " + std::to_string(joint_id));
  }
  return it->second;
}

double CalibrationMap::NormalizeCurrent(double current, int joint_id) const {
  const auto& c = For(joint_id);
  if (!c.real) throw ConfigError("calibration: joint " + std::to_string(joint_id) + " has no real-domain fit");
  return std::clamp(current / c.real->i_max, 0.0, 1.0);
}

double CalibrationMap::NormalizeTorque(double torque, int joint_id) const {
  const auto& c = For(joint_id);
  if (!c.sim) throw ConfigError("calibration: joint " + std::to_string(joint_id) + " has no sim-domain fit");
  return std::clamp(torque / c.sim->tau_max, 0.0, 1.0);
}

nlohmann::json CalibrationMap::ToJson() const {
  ju::Json joints = ju::Json::array();
  for (const auto& [id, c] : joints_) {
    ju::Json j;
    if (!shared_) j["joint_id"] = id;
    if (c.real) {
      j["real"] = {{"alpha", c.real->alpha},
                   {"i_max", c.real->i_max},
                   {"f_max", c.real->f_max},
                   {"rms_residual", c.real->rms}};
    }
    if (c.sim) {
      j["sim"] = {{"beta", c.sim->beta},
                  {"tau_max", c.sim->tau_max},
                  {"f_max", c.sim->f_max},
                  {"rms_residual", c.sim->rms}};
    }
    joints.push_back(j);
  }
  return {{"schema_version", 1}, {"shared", shared_}, {"joints", joints}};
}

CalibrationMap CalibrationMap::FromJson(const nlohmann::json& doc) {
  const int version = ju::IntegerOr(doc, "schema_version", 1, "");
  if (version != 1) ju::Fail("schema_version", "unsupported version " + std::to_string(version));
  CalibrationMap map;
  map.shared_ = ju::BoolOr(doc, "shared", false, "");
  const ju::Json& joints = ju::Require(doc, "joints", "");
  if (!joints.is_array()) ju::Fail("joints", "expected array");
  if (map.shared_ && joints.size() != 1) ju::Fail("joints", "a shared map has exactly one entry");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string p = ju::Index("joints", i);
    const ju::Json& j = joints[i];
    int id = kSharedKey;
    if (!map.shared_) {
      const ju::Json& idj = ju::Require(j, "joint_id", p);
      if (!idj.is_number_integer()) ju::Fail(ju::Child(p, "joint_id"), "expected integer");
      id = idj.get<int>();
    }
    JointCalibration c;
    if (j.contains("real")) {
      const std::string rp = ju::Child(p, "real");
      c.real = RealCalibration{Positive(j["real"], "alpha", rp), Positive(j["real"], "i_max", rp),
                               Positive(j["real"], "f_max", rp),
                               ju::NumberOr(j["real"], "rms_residual", 0.0, rp)};
    }
    if (j.contains("sim")) {
      const std::string sp = ju::Child(p, "sim");
      c.sim = SimCalibration{Positive(j["sim"], "beta", sp), Positive(j["sim"], "tau_max", sp),
                             Positive(j["sim"], "f_max", sp),
                             ju::NumberOr(j["sim"], "rms_residual", 0.0, sp)};
    }
    map.joints_[id] = c;
  }
  return map;
}

CalibrationMap CalibrationMap::Load(const std::filesystem::path& file) {
  return FromJson(ju::ParseFile(file));
}

std::vector<DomainSample> ReadCalibrationCsv(std::istream& in, const std::string& source) {
  std::vector<DomainSample> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      header_seen = true;
      if (cells != std::vector<std::string>{"joint_id", "drive_signal", "contact_force", "domain"}) {
        throw ConfigError(where + ": expected header joint_id,drive_signal,contact_force,domain");
      }
      continue;
    }
    if (cells.size() != 4) throw ConfigError(where + ": expected 4 columns");
    DomainSample ds;
    try {
      std::size_t used = 0;
      ds.sample.joint_id = std::stoi(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument(cells[0]);
      ds.sample.drive_signal = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument(cells[1]);
      ds.sample.contact_force = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument(cells[2]);
    } catch (const std::exception&) {
      throw ConfigError(where + ": malformed number");
    }
    if (!std::isfinite(ds.sample.drive_signal) || !std::isfinite(ds.sample.contact_force)) {
      throw ConfigError(where + ": non-finite value");
    }
    if (cells[3] == "real") {
      ds.domain = CalibrationDomain::kReal;
    } else if (cells[3] == "sim") {
      ds.domain = CalibrationDomain::kSim;
    } else {
      throw ConfigError(where + ": domain must be 'real' or 'sim'");
    }
    out.push_back(ds);
  }
  if (out.empty()) throw ConfigError(source + ": no calibration rows");
  return out;
}

std::vector<DomainSample> ReadCalibrationCsv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open CSV");
  return ReadCalibrationCsv(in, file.string());
}

}  // namespace taxelsim
