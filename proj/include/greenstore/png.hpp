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

#ifndef GREENSTORE_PNG_HPP
#define GREENSTORE_PNG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "greenstore/color.hpp"
#include "greenstore/raster.hpp"

namespace greenstore {

enum class FilterType : std::uint8_t { None = 0, Sub = 1, Up = 2, Average = 3, Paeth = 4 };

struct FilterStrategy {
  bool adaptive = true;
  FilterType fixed = FilterType::None;

  static FilterStrategy Adaptive() { return {true, FilterType::None}; }
  static FilterStrategy Fixed(FilterType t) { return {false, t}; }
};

struct EncodeParams {
  FilterStrategy filter = FilterStrategy::Adaptive();
  int compression_effort = 6;  // 1..9
  bool palette_mode = true;    // indexed output when a palette is supplied
};

/// Decodes an 8-bit (or packed sub-byte gray/indexed) non-interlaced PNG.
/// Gray becomes RGB, anything carrying transparency becomes RGBA.
/// Throws CorruptInput for malformed streams and Unsupported for 16-bit or
/// interlaced images.
RasterImage decode_png(std::span<const std::uint8_t> bytes);

/// Encodes `img` as PNG. With a palette (and palette_mode set) the output is
/// indexed color at the smallest bit depth holding the palette; every pixel
/// must then be a palette member (PaletteMismatch otherwise).
std::vector<std::uint8_t> encode_png(const RasterImage& img, const std::optional<Palette>& palette,
                                     const EncodeParams& params = {});
inline std::vector<std::uint8_t> encode_png(const RasterImage& img, const EncodeParams& params = {}) {
  return encode_png(img, std::nullopt, params);
}

/// Filter-selection heuristic: sum of the filtered bytes read as signed values.
std::uint64_t filter_cost(std::span<const std::uint8_t> filtered);

/// Applies one PNG filter to `row` given the previous (unfiltered) row, which
/// is all zeros for the first scanline.
void apply_filter(FilterType type, std::span<const std::uint8_t> row, std::span<const std::uint8_t> prev,
                  std::size_t bpp, std::span<std::uint8_t> out);

/// Filters `rows` (height x row_bytes raw scanline bytes) and returns the
/// stream that goes into deflate: one filter-type byte then the filtered row.
std::vector<std::uint8_t> filter_scanlines(std::span<const std::uint8_t> rows, std::size_t row_bytes,
                                           std::size_t bpp, FilterStrategy strategy);

/// Inverse of filter_scanlines. Throws CorruptInput on a bad filter byte.
std::vector<std::uint8_t> unfilter_scanlines(std::span<const std::uint8_t> stream, std::size_t row_bytes,
                                             std::size_t height, std::size_t bpp);

struct StorageSizes {
  std::uint64_t original_bytes = 0;
  std::uint64_t stored_bytes = 0;
};

StorageSizes measure_sizes(std::span<const std::uint8_t> original, std::span<const std::uint8_t> stored);
/// Summed on-disk lengths of two file sets.
StorageSizes measure_sizes(std::span<const std::filesystem::path> originals,
                           std::span<const std::filesystem::path> stored);

}  // namespace greenstore

#endif  // GREENSTORE_PNG_HPP
