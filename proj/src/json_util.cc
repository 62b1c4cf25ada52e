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

#include "taxelsim/json_util.h"

#include <cmath>
#include <fstream>

#include "taxelsim/errors.h"

namespace taxelsim::json_util {

std::string Child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void Fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

const Json& Require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) Fail(path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) Fail(Child(path, key), "missing required field");
  return *it;
}

double Number(const Json& j, const std::string& path) {
  if (!j.is_number()) Fail(path, "expected number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) Fail(path, "expected finite number");
  return v;
}

double NumberOr(const Json& j, const std::string& key, double fallback,
                const std::string& path) {
  if (!j.is_object()) Fail(path, "expected object");
  auto it = j.find(key);
  return it == j.end() ? fallback : Number(*it, Child(path, key));
}

int IntegerOr(const Json& j, const std::string& key, int fallback,
              const std::string& path) {
  if (!j.is_object()) Fail(path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) Fail(Child(path, key), "expected integer");
  return it->get<int>();
}

bool BoolOr(const Json& j, const std::string& key, bool fallback,
            const std::string& path) {
  if (!j.is_object()) Fail(path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) Fail(Child(path, key), "expected boolean");
  return it->get<bool>();
}

std::string StringOr(const Json& j, const std::string& key,
                     const std::string& fallback, const std::string& path) {
  if (!j.is_object()) Fail(path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) Fail(Child(path, key), "expected string");
  return it->get<std::string>();
}

Vec3 ReadVec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) Fail(path, "expected array of 3 numbers");
  return {Number(j[0], Index(path, 0)), Number(j[1], Index(path, 1)),
          Number(j[2], Index(path, 2))};
}

std::vector<double> ReadNumbers(const Json& j, const std::string& path) {
  if (!j.is_array()) Fail(path, "expected array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Number(j[i], Index(path, i)));
  return out;
}

std::pair<double, double> ReadInterval(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) Fail(path, "expected [low, high]");
  const double lo = Number(j[0], Index(path, 0));
  const double hi = Number(j[1], Index(path, 1));
  if (lo > hi) Fail(path, "interval low exceeds high");
  return {lo, hi};
}

Transform ReadTransform(const Json& j, const std::string& path) {
  if (!j.is_object()) Fail(path, "expected transform object");
  Transform t;
  if (j.contains("translation")) {
    t.translation = ReadVec3(j["translation"], Child(path, "translation"));
  }
  if (j.contains("rotation") && j.contains("axis_angle")) {
    Fail(path, "give either rotation or axis_angle, not both");
  }
  if (j.contains("rotation")) {
    const std::string rp = Child(path, "rotation");
    const Json& rows = j["rotation"];
    if (!rows.is_array() || rows.size() != 3) Fail(rp, "expected 3x3 row array");
    for (int r = 0; r < 3; ++r) {
      t.rotation.row(r) = ReadVec3(rows[r], Index(rp, r)).transpose();
    }
    if (!IsRotation(t.rotation, kRotationInputTolerance)) Fail(rp, "not a rotation matrix");
  } else if (j.contains("axis_angle")) {
    const std::string ap = Child(path, "axis_angle");
    const std::vector<double> v = ReadNumbers(j["axis_angle"], ap);
    if (v.size() != 4) Fail(ap, "expected [ax, ay, az, angle]");
    const Vec3 axis(v[0], v[1], v[2]);
    if (axis.norm() < 1e-12) Fail(ap, "zero axis");
    t.rotation = AxisAngle(axis, v[3]);
  }
  return t;
}

Json WriteVec3(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json WriteTransform(const Transform& t) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(WriteVec3(t.rotation.row(r).transpose()));
  return {{"translation", WriteVec3(t.translation)}, {"rotation", rows}};
}

Json ParseFile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(file.string() + ": JSON parse error: " + e.what());
  }
}

}  // namespace taxelsim::json_util
