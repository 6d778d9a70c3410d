// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamforge Authors.
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

namespace beamforge {

/// Worker count used by parallel_for. 0 (the default) means
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Calls body(i) for i in [0, n). Work is split into contiguous static
/// chunks; callers write into pre-sized slots so results never depend on the
/// number of workers. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace beamforge
