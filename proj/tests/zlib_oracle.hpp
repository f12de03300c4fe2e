// Copyright 2026 The GreenStore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GREENSTORE_TESTS_ZLIB_ORACLE_HPP
#define GREENSTORE_TESTS_ZLIB_ORACLE_HPP

#include <zlib.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "test_util.hpp"

namespace greenstore::testing {

/// zlib's inflate: an RFC 1950/1951 decoder independent of the one under test.
inline std::vector<std::uint8_t> zlib_inflate(std::span<const std::uint8_t> in, std::size_t expected_size) {
  std::vector<std::uint8_t> out(expected_size + 1);
  uLongf len = static_cast<uLongf>(out.size());
  if (uncompress(out.data(), &len, in.data(), static_cast<uLong>(in.size())) != Z_OK)
    throw std::runtime_error("zlib rejected the stream");
  out.resize(len);
  return out;
}

inline std::vector<std::uint8_t> zlib_deflate(std::span<const std::uint8_t> in, int level) {
  uLongf len = compressBound(static_cast<uLong>(in.size()));
  std::vector<std::uint8_t> out(len);
  if (compress2(out.data(), &len, in.data(), static_cast<uLong>(in.size()), level) != Z_OK)
    throw std::runtime_error("zlib compress failed");
  out.resize(len);
  return out;
}

/// Assembles a PNG from raw chunks, CRCs computed with zlib.
inline std::vector<std::uint8_t> build_png(const std::vector<PngChunk>& chunks) {
  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  auto be32 = [&](std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
  };
  for (const auto& c : chunks) {
    be32(static_cast<std::uint32_t>(c.data.size()));
    std::vector<std::uint8_t> body(c.type.begin(), c.type.end());
    body.insert(body.end(), c.data.begin(), c.data.end());
    out.insert(out.end(), body.begin(), body.end());
    be32(static_cast<std::uint32_t>(::crc32(0L, body.data(), static_cast<uInt>(body.size()))));
  }
  return out;
}

}  // namespace greenstore::testing

#endif  // GREENSTORE_TESTS_ZLIB_ORACLE_HPP
