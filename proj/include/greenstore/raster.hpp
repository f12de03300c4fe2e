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

#ifndef GREENSTORE_RASTER_HPP
#define GREENSTORE_RASTER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace greenstore {

/// Row-major plane used by the floating-point stages (resampling, dithering,
/// metrics). Scalar is typically double.
template <typename Scalar>
using Plane = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Decoded 8-bit pixel grid, interleaved RGB or RGBA, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  /// Zero-filled image. Throws InvalidConfig on zero dims or channels not in {3, 4}.
  RasterImage(std::size_t width, std::size_t height, std::size_t channels);
  /// Adopts `data`; its length must be width*height*channels.
  RasterImage(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<std::uint8_t> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }
  std::size_t stride() const noexcept { return width_ * channels_; }
  bool has_alpha() const noexcept { return channels_ == 4; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
    return data_[(y * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
    return data_[(y * width_ + x) * channels_ + c];
  }

  std::span<const std::uint8_t> row(std::size_t y) const {
    return std::span<const std::uint8_t>(data_).subspan(y * stride(), stride());
  }

  /// One channel as a height x width plane.
  template <typename Scalar>
  Plane<Scalar> plane(std::size_t c) const {
    Plane<Scalar> out(height_, width_);
    for (std::size_t y = 0; y < height_; ++y)
      for (std::size_t x = 0; x < width_; ++x) out(y, x) = static_cast<Scalar>(at(x, y, c));
    return out;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Round half away from zero and clamp into [0, 255].
template <typename Scalar>
inline std::uint8_t to_sample(Scalar v) {
  using std::round;
  const Scalar r = round(v);
  if (!(r > Scalar(0))) return 0;
  if (r >= Scalar(255)) return 255;
  return static_cast<std::uint8_t>(r);
}

/// Rebuilds an image from per-channel planes (all the same shape).
template <typename Scalar>
RasterImage from_planes(const std::vector<Plane<Scalar>>& planes) {
  const auto h = static_cast<std::size_t>(planes.front().rows());
  const auto w = static_cast<std::size_t>(planes.front().cols());
  RasterImage out(w, h, planes.size());
  for (std::size_t c = 0; c < planes.size(); ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) out.at(x, y, c) = to_sample(planes[c](y, x));
  return out;
}

/// BT.601 luma of the RGB channels.
template <typename Scalar>
Plane<Scalar> luma(const RasterImage& img) {
  Plane<Scalar> out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      out(y, x) = Scalar(0.299) * img.at(x, y, 0) + Scalar(0.587) * img.at(x, y, 1) +
                  Scalar(0.114) * img.at(x, y, 2);
  return out;
}

/// Crops (or pads by edge replication) to width x height, keeping the
/// centre of the source at the centre of the result.
RasterImage center_crop(const RasterImage& img, std::size_t width, std::size_t height);

RasterImage mirror_horizontal(const RasterImage& img);

}  // namespace greenstore

#endif  // GREENSTORE_RASTER_HPP
