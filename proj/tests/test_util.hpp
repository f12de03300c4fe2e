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

#ifndef GREENSTORE_TESTS_TEST_UTIL_HPP
#define GREENSTORE_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenstore/raster.hpp"

namespace greenstore::testing {

inline RasterImage random_image(std::mt19937& rng, std::size_t w, std::size_t h, std::size_t channels = 3) {
  std::uniform_int_distribution<int> dist(0, 255);
  RasterImage img(w, h, channels);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(dist(rng));
  return img;
}

/// Smooth gradient with mild noise: compresses like a photo, not like noise.
inline RasterImage smooth_image(std::mt19937& rng, std::size_t w, std::size_t h) {
  std::normal_distribution<double> noise(0.0, 4.0);
  RasterImage img(w, h, 3);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double fx = double(x) / double(w), fy = double(y) / double(h);
      img.at(x, y, 0) = to_sample(200.0 * fx + 30.0 * std::sin(9.0 * fy) + noise(rng));
      img.at(x, y, 1) = to_sample(180.0 * fy + 40.0 * std::cos(7.0 * fx) + noise(rng));
      img.at(x, y, 2) = to_sample(120.0 + 100.0 * std::sin(5.0 * (fx + fy)) + noise(rng));
    }
  return img;
}

inline RasterImage constant_image(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RasterImage img(w, h, 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.data()[i * 3] = r;
    img.data()[i * 3 + 1] = g;
    img.data()[i * 3 + 2] = b;
  }
  return img;
}

struct PngChunk {
  std::string type;
  std::vector<std::uint8_t> data;
};

/// Minimal chunk walker for inspecting encoder output.
inline std::vector<PngChunk> png_chunks(std::span<const std::uint8_t> png) {
  std::vector<PngChunk> chunks;
  std::size_t off = 8;
  while (off + 12 <= png.size()) {
    const std::uint32_t len = (std::uint32_t{png[off]} << 24) | (std::uint32_t{png[off + 1]} << 16) |
                              (std::uint32_t{png[off + 2]} << 8) | png[off + 3];
    chunks.push_back({std::string(png.begin() + off + 4, png.begin() + off + 8),
                      std::vector<std::uint8_t>(png.begin() + off + 8, png.begin() + off + 8 + len)});
    off += 12 + len;
  }
  return chunks;
}

inline std::vector<std::uint8_t> idat_stream(std::span<const std::uint8_t> png) {
  std::vector<std::uint8_t> all;
  for (const auto& c : png_chunks(png))
    if (c.type == "IDAT") all.insert(all.end(), c.data.begin(), c.data.end());
  return all;
}

inline std::vector<std::uint8_t> ihdr(std::uint32_t w, std::uint32_t h, std::uint8_t depth, std::uint8_t color,
                                      std::uint8_t interlace = 0) {
  std::vector<std::uint8_t> d;
  for (auto v : {w, h})
    for (int s = 24; s >= 0; s -= 8) d.push_back(static_cast<std::uint8_t>(v >> s));
  d.insert(d.end(), {depth, color, 0, 0, interlace});
  return d;
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "greenstore-test-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path test_data(const std::string& rel) { return std::filesystem::path(GREENSTORE_TEST_DATA) / rel; }

}  // namespace greenstore::testing

#endif  // GREENSTORE_TESTS_TEST_UTIL_HPP
