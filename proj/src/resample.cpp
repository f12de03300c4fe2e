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

#include "greenstore/resample.hpp"

#include <string>
#include <vector>

#include "greenstore/error.hpp"

namespace greenstore {

RasterImage resize_to(const RasterImage& img, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidConfig, "resize target has a zero dimension");
  if (img.empty()) throw Error(ErrorCode::InvalidConfig, "cannot resize an empty image");
  std::vector<Plane<double>> planes;
  planes.reserve(img.channels());
  for (std::size_t c = 0; c < img.channels(); ++c) planes.push_back(resize_plane(img.plane<double>(c), width, height));
  return from_planes(planes);
}

RasterImage resize(const RasterImage& img, ResampleSpec spec) {
  if (spec.numerator == 0 || spec.denominator == 0) throw Error(ErrorCode::InvalidConfig, "resample factor must be positive");
  // Round half up on the exact rational.
  auto scaled = [&](std::size_t dim) { return (2 * dim * spec.numerator + spec.denominator) / (2 * spec.denominator); };
  return resize_to(img, scaled(img.width()), scaled(img.height()));
}

RasterImage downscale_4x(const RasterImage& img) {
  if (img.width() < 4 || img.height() < 4)
    throw Error(ErrorCode::TooSmall, "downscale needs at least 4x4, got " + std::to_string(img.width()) + "x" +
                                         std::to_string(img.height()));
  return resize_to(img, (img.width() + 3) / 4, (img.height() + 3) / 4);
}

RasterImage upscale_4x(const RasterImage& img) { return resize_to(img, img.width() * 4, img.height() * 4); }

RasterImage nearest_downscale_4x(const RasterImage& img) {
  if (img.width() < 4 || img.height() < 4) throw Error(ErrorCode::TooSmall, "downscale needs at least 4x4");
  const std::size_t w = (img.width() + 3) / 4, h = (img.height() + 3) / 4;
  RasterImage out(w, h, img.channels());
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < img.channels(); ++c)
        out.at(x, y, c) = img.at(std::min(x * 4 + 2, img.width() - 1), std::min(y * 4 + 2, img.height() - 1), c);
  return out;
}

RasterImage nearest_upscale_4x(const RasterImage& img) {
  RasterImage out(img.width() * 4, img.height() * 4, img.channels());
  for (std::size_t y = 0; y < out.height(); ++y)
    for (std::size_t x = 0; x < out.width(); ++x)
      for (std::size_t c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(x / 4, y / 4, c);
  return out;
}

}  // namespace greenstore
