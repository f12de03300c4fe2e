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

#ifndef GREENSTORE_COLOR_HPP
#define GREENSTORE_COLOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace greenstore {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  std::uint32_t packed() const noexcept { return (std::uint32_t{r} << 16) | (std::uint32_t{g} << 8) | b; }
  static Rgb unpack(std::uint32_t v) noexcept {
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  }
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Ordered list of 1..256 distinct RGB colors.
class Palette {
 public:
  static constexpr std::size_t kMaxSize = 256;

  /// Throws InvalidConfig when empty, longer than 256, or holding duplicates.
  explicit Palette(std::vector<Rgb> colors);

  std::size_t size() const noexcept { return colors_.size(); }
  std::span<const Rgb> colors() const noexcept { return colors_; }
  const Rgb& operator[](std::size_t i) const { return colors_[i]; }

  std::optional<std::uint8_t> index_of(Rgb c) const;

  friend bool operator==(const Palette& a, const Palette& b) { return a.colors_ == b.colors_; }

 private:
  std::vector<Rgb> colors_;
  std::unordered_map<std::uint32_t, std::uint8_t> index_;
};

}  // namespace greenstore

#endif  // GREENSTORE_COLOR_HPP
