// Copyright 2026 The tcv Authors
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

#ifndef TCV_PARALLEL_HPP_
#define TCV_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace tcv
{

// Worker cap for every parallel loop in the library. 0 means "use the
// hardware concurrency". Results never depend on this value.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous static blocks,
// so any body that only writes slot i is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> & body);

}  // namespace tcv

#endif  // TCV_PARALLEL_HPP_
