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

// Action providers. A policy maps the current observation and state to 12
// target joint positions.

#ifndef TAXELSIM_POLICY_H_
#define TAXELSIM_POLICY_H_

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "taxelsim/env.h"

namespace taxelsim {

using Policy = std::function<std::vector<double>(const Observation&, const Env&)>;

// "zero", "scripted-close" or "scripted-rotate". Throws ConfigError for
// other names ("external-stdin" is built with MakeStreamPolicy).
Policy MakePolicy(const std::string& name);

// Writes the actor observation as one JSON array per line to `out`, then
// reads one JSON array of actions per line from `in`.
Policy MakeStreamPolicy(std::istream& in, std::ostream& out);

inline const std::vector<std::string>& PolicyNames() {
  static const std::vector<std::string> names{"zero", "scripted-close", "scripted-rotate",
                                              "external-stdin"};
  return names;
}

}  // namespace taxelsim

#endif  // TAXELSIM_POLICY_H_
