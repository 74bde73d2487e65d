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

#ifndef TCV_SRC_BINARY_IO_HPP_
#define TCV_SRC_BINARY_IO_HPP_

#include "tcv/common.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace tcv::detail
{

static_assert(
  std::endian::native == std::endian::little, "binary matrix files assume a little-endian host");

inline void write_magic(std::ostream & out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream & in, const char (&magic)[5], const std::filesystem::path & path)
{
  char buf[4] = {};
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0) {
    throw DataError("bad magic in " + path.string() + " (expected " + std::string(magic) + ")");
  }
}

inline void write_u32(std::ostream & out, std::uint32_t v)
{
  out.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

inline std::uint32_t read_u32(std::istream & in)
{
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char *>(&v), sizeof(v));
  if (!in) {
    throw DataError("truncated binary header");
  }
  return v;
}

inline void write_f64_array(std::ostream & out, const std::vector<double> & values)
{
  out.write(reinterpret_cast<const char *>(values.data()), static_cast<std::streamsize>(values.size() * 8));
  if (!out) {
    throw DataError("write failed");
  }
}

inline std::vector<double> read_f64_array(std::istream & in, std::size_t count)
{
  std::vector<double> values(count);
  in.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(count * 8));
  if (!in) {
    throw DataError("truncated matrix payload");
  }
  return values;
}

}  // namespace tcv::detail

#endif  // TCV_SRC_BINARY_IO_HPP_
