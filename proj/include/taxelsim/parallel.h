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

#ifndef TAXELSIM_PARALLEL_H_
#define TAXELSIM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace taxelsim {

// Number of worker threads to use. `requested` > 0 wins; otherwise the
// hardware concurrency. Either way the result is capped by the
// TAXELSIM_THREADS environment variable when it is set to a positive value.
int WorkerCount(int requested = 0);

// Calls fn(i) for every i in [0, n). Indices are handed out dynamically, so
// fn must not depend on execution order. The first exception thrown by any
// call is rethrown after all workers join.
void ParallelFor(std::size_t n, int max_threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace taxelsim

#endif  // TAXELSIM_PARALLEL_H_
