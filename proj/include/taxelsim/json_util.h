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

// Path-aware accessors over nlohmann::json. Every failure throws
// ConfigError whose message starts with the offending JSON path, e.g.
// "fingers[2].joints[0].axis: expected array of 3 numbers".

#ifndef TAXELSIM_JSON_UTIL_H_
#define TAXELSIM_JSON_UTIL_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "taxelsim/rotation.h"

namespace taxelsim::json_util {

using Json = nlohmann::json;

std::string Child(const std::string& path, const std::string& key);
std::string Index(const std::string& path, std::size_t i);

[[noreturn]] void Fail(const std::string& path, const std::string& what);

const Json& Require(const Json& j, const std::string& key, const std::string& path);
double Number(const Json& j, const std::string& path);
double NumberOr(const Json& j, const std::string& key, double fallback,
                const std::string& path);
int IntegerOr(const Json& j, const std::string& key, int fallback,
              const std::string& path);
bool BoolOr(const Json& j, const std::string& key, bool fallback,
            const std::string& path);
std::string StringOr(const Json& j, const std::string& key,
                     const std::string& fallback, const std::string& path);
Vec3 ReadVec3(const Json& j, const std::string& path);
std::vector<double> ReadNumbers(const Json& j, const std::string& path);
// [low, high] with low <= high.
std::pair<double, double> ReadInterval(const Json& j, const std::string& path);
// {"translation": [..], "rotation": [[..],[..],[..]]} or
// {"translation": [..], "axis_angle": [ax, ay, az, angle]}; both optional.
Transform ReadTransform(const Json& j, const std::string& path);

Json WriteVec3(const Vec3& v);
Json WriteTransform(const Transform& t);

Json ParseFile(const std::filesystem::path& file);

}  // namespace taxelsim::json_util

#endif  // TAXELSIM_JSON_UTIL_H_
