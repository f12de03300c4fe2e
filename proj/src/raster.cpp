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

#include "greenstore/raster.hpp"

#include <algorithm>
#include <string>

#include "greenstore/error.hpp"

namespace greenstore {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CorruptInput: return "CorruptInput";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::PaletteMismatch: return "PaletteMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::StorageError: return "StorageError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AmbiguousName: return "AmbiguousName";
    case ErrorCode::BackendFailure: return "BackendFailure";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
  }
  return "Unknown";
}

namespace {

void check_shape(std::size_t width, std::size_t height, std::size_t channels) {
  if (width == 0 || height == 0)
    throw Error(ErrorCode::InvalidConfig, "image dimensions must be at least 1x1");
  if (channels != 3 && channels != 4)
    throw Error(ErrorCode::InvalidConfig, "channels must be 3 or 4, got " + std::to_string(channels));
}

}  // namespace

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  data_.assign(width * height * channels, 0);
}

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != width * height * channels)
    throw Error(ErrorCode::InvalidConfig, "sample buffer length does not match dimensions");
}

RasterImage center_crop(const RasterImage& img, std::size_t width, std::size_t height) {
  RasterImage out(width, height, img.channels());
  // Signed offsets: positive crops, negative pads.
  const auto off_x = (static_cast<long long>(img.width()) - static_cast<long long>(width)) / 2;
  const auto off_y = (static_cast<long long>(img.height()) - static_cast<long long>(height)) / 2;
  const auto max_x = static_cast<long long>(img.width()) - 1;
  const auto max_y = static_cast<long long>(img.height()) - 1;
  for (std::size_t y = 0; y < height; ++y) {
    const auto sy = static_cast<std::size_t>(std::clamp(static_cast<long long>(y) + off_y, 0LL, max_y));
    for (std::size_t x = 0; x < width; ++x) {
      const auto sx = static_cast<std::size_t>(std::clamp(static_cast<long long>(x) + off_x, 0LL, max_x));
      for (std::size_t c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

RasterImage mirror_horizontal(const RasterImage& img) {
  RasterImage out(img.width(), img.height(), img.channels());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      for (std::size_t c = 0; c < img.channels(); ++c)
        out.at(img.width() - 1 - x, y, c) = img.at(x, y, c);
  return out;
}

}  // namespace greenstore
