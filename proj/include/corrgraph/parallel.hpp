// Copyright 2026 The corrgraph Authors.
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

#pragma once

#include <cstddef>
#include <functional>

namespace corrgraph {

/// Thread count from an explicit request (> 0), else the CORRGRAPH_THREADS
/// environment variable, else 1.
int resolve_threads(int requested);

/// Runs body(k) for k in [0, count) on up to `threads` threads with static
/// contiguous chunks. body must only write state owned by index k; results
/// are then independent of the thread count. The first exception thrown by
/// any worker is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace corrgraph
