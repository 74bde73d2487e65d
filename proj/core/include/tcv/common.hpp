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

#ifndef TCV_COMMON_HPP_
#define TCV_COMMON_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcv
{

using EdgeId = std::uint32_t;
using NodeId = std::uint32_t;
using TrajectoryId = std::int64_t;

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

// Input that violates a documented file or value contract. The CLI maps this
// to exit code 2.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a, used for network fingerprints and model checksums.
class Fnv1a
{
public:
  void update(const void * data, std::size_t size)
  {
    const auto * bytes = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= bytes[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void update_value(const T & value)
  {
    update(&value, sizeof(T));
  }
  std::uint64_t digest() const { return state_; }

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t value);

}  // namespace tcv

#endif  // TCV_COMMON_HPP_
