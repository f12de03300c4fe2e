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

#ifndef GREENSTORE_DEFLATE_HPP
#define GREENSTORE_DEFLATE_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace greenstore {

// RFC 1951 deflate and the RFC 1950 zlib wrapper around it.
//
// `effort` follows the zlib convention: 1 is fastest, 9 searches hardest.
// Efforts 1-3 use greedy parsing, 4 and above use one-step lazy matching.

std::vector<std::uint8_t> deflate_raw(std::span<const std::uint8_t> input, int effort = 6);
std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input);

std::vector<std::uint8_t> zlib_compress(std::span<const std::uint8_t> input, int effort = 6);
/// Throws CorruptInput on a bad header, bad stream or checksum mismatch.
std::vector<std::uint8_t> zlib_decompress(std::span<const std::uint8_t> input);

std::uint32_t adler32(std::span<const std::uint8_t> data, std::uint32_t seed = 1);
std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed = 0);

}  // namespace greenstore

#endif  // GREENSTORE_DEFLATE_HPP
