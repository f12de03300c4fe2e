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

#ifndef GREENSTORE_PALETTE_HPP
#define GREENSTORE_PALETTE_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "greenstore/color.hpp"
#include "greenstore/raster.hpp"

namespace greenstore {

struct DitherConfig {
  double scale = 1.0;             // error-diffusion intensity, [0, 1]
  std::size_t palette_size = 256; // [2, 256]

  /// Throws InvalidConfig when either field is out of range.
  void validate() const;
};

/// Median-cut palette of at most `n` colors over the RGB channels of `img`.
///
/// The box with the widest channel range is split at the pixel-weighted
/// median of that channel until `n` boxes exist or none can be split; each box
/// contributes the rounded pixel-weighted mean of its members. When the image
/// has at most `n` distinct colors the palette is exactly that set, in
/// ascending packed-RGB order.
Palette median_cut(const RasterImage& img, std::size_t n);

/// Exact nearest-color search (squared RGB distance, lowest index on ties),
/// accelerated by a coarse grid of per-cell candidate lists.
class NearestColor {
 public:
  explicit NearestColor(const Palette& palette);

  std::size_t operator()(double r, double g, double b) const;

 private:
  static constexpr int kCellBits = 3;  // cells are 8 levels wide
  static constexpr int kCells = 256 >> kCellBits;

  std::vector<Rgb> colors_;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint16_t> candidates_;
};

/// Floyd-Steinberg error diffusion onto `palette` with every diffusion weight
/// multiplied by `scale`. Alpha, when present, is copied through.
RasterImage dither_floyd_steinberg(const RasterImage& img, const Palette& palette, double scale);

/// median_cut followed by dither_floyd_steinberg.
std::pair<RasterImage, Palette> quantize_for_storage(const RasterImage& img, const DitherConfig& cfg);

}  // namespace greenstore

#endif  // GREENSTORE_PALETTE_HPP
