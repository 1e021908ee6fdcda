// Copyright 2026 The srnf Authors
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

namespace srnf {

/// Upper bound on worker threads used by library loops; 0 means hardware
/// concurrency. Results never depend on this value.
void set_thread_limit(int n);
int thread_limit();

/// Runs fn(k) for k in [0, n). Each index writes only its own outputs, so
/// callers reduce afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace srnf
