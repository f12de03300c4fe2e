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

#include "greenstore/palette.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "greenstore/error.hpp"

namespace greenstore {

void DitherConfig::validate() const {
  if (!(scale >= 0.0 && scale <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "dither scale must be in [0, 1], got " + std::to_string(scale));
  if (palette_size < 2 || palette_size > Palette::kMaxSize)
    throw Error(ErrorCode::InvalidConfig, "palette size must be in [2, 256], got " + std::to_string(palette_size));
}

namespace {

struct ColorCount {
  Rgb color;
  std::uint64_t count;
};

std::uint8_t channel(const Rgb& c, int ch) { return ch == 0 ? c.r : ch == 1 ? c.g : c.b; }

struct Box {
  std::size_t begin, end;
  std::array<std::uint8_t, 3> lo, hi;

  int widest_channel() const {
    int best = 0;
    for (int ch = 1; ch < 3; ++ch)
      if (hi[ch] - lo[ch] > hi[best] - lo[best]) best = ch;
    return best;
  }
  int range() const {
    const int ch = widest_channel();
    return hi[ch] - lo[ch];
  }
};

Box make_box(const std::vector<ColorCount>& entries, std::size_t begin, std::size_t end) {
  Box box{begin, end, {255, 255, 255}, {0, 0, 0}};
  for (std::size_t i = begin; i < end; ++i) {
    for (int ch = 0; ch < 3; ++ch) {
      const auto v = channel(entries[i].color, ch);
      box.lo[ch] = std::min(box.lo[ch], v);
      box.hi[ch] = std::max(box.hi[ch], v);
    }
  }
  return box;
}

std::vector<ColorCount> histogram(const RasterImage& img) {
  std::vector<std::uint32_t> packed(img.pixel_count());
  const std::size_t ch = img.channels();
  const auto data = img.data();
  for (std::size_t i = 0; i < packed.size(); ++i)
    packed[i] = Rgb{data[i * ch], data[i * ch + 1], data[i * ch + 2]}.packed();
  std::sort(packed.begin(), packed.end());
  std::vector<ColorCount> out;
  for (std::size_t i = 0; i < packed.size();) {
    std::size_t j = i;
    while (j < packed.size() && packed[j] == packed[i]) ++j;
    out.push_back({Rgb::unpack(packed[i]), j - i});
    i = j;
  }
  return out;
}

}  // namespace

Palette median_cut(const RasterImage& img, std::size_t n) {
  if (n < 2 || n > Palette::kMaxSize)
    throw Error(ErrorCode::InvalidConfig, "palette size must be in [2, 256], got " + std::to_string(n));
  if (img.empty()) throw Error(ErrorCode::InvalidConfig, "cannot build a palette for an empty image");

  auto entries = histogram(img);
  if (entries.size() <= n) {
    std::vector<Rgb> colors;
    colors.reserve(entries.size());
    for (const auto& e : entries) colors.push_back(e.color);
    return Palette(std::move(colors));
  }

  std::vector<Box> boxes = {make_box(entries, 0, entries.size())};
  while (boxes.size() < n) {
    std::size_t pick = boxes.size();
    int best_range = -1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (boxes[i].end - boxes[i].begin < 2) continue;
      if (boxes[i].range() > best_range) {
        best_range = boxes[i].range();
        pick = i;
      }
    }
    if (pick == boxes.size()) break;

    const Box box = boxes[pick];
    const int ch = box.widest_channel();
    const auto first = entries.begin() + static_cast<std::ptrdiff_t>(box.begin);
    const auto last = entries.begin() + static_cast<std::ptrdiff_t>(box.end);
    std::sort(first, last, [ch](const ColorCount& a, const ColorCount& b) {
      const auto va = channel(a.color, ch), vb = channel(b.color, ch);
      return va != vb ? va < vb : a.color.packed() < b.color.packed();
    });
    std::uint64_t total = 0;
    for (auto it = first; it != last; ++it) total += it->count;
    std::uint64_t running = 0;
    std::size_t split = box.begin;
    for (; split < box.end - 1; ++split) {
      running += entries[split].count;
      if (2 * running >= total) break;
    }
    // split is the last index of the lower half; both halves stay non-empty.
    split = std::min(split, box.end - 2) + 1;
    boxes[pick] = make_box(entries, box.begin, split);
    boxes.insert(boxes.begin() + static_cast<std::ptrdiff_t>(pick) + 1, make_box(entries, split, box.end));
  }

  std::vector<Rgb> colors;
  for (const Box& box : boxes) {
    std::array<std::uint64_t, 3> sum{};
    std::uint64_t count = 0;
    for (std::size_t i = box.begin; i < box.end; ++i) {
      for (int ch = 0; ch < 3; ++ch) sum[static_cast<std::size_t>(ch)] += channel(entries[i].color, ch) * entries[i].count;
      count += entries[i].count;
    }
    Rgb mean;
    mean.r = to_sample(static_cast<double>(sum[0]) / static_cast<double>(count));
    mean.g = to_sample(static_cast<double>(sum[1]) / static_cast<double>(count));
    mean.b = to_sample(static_cast<double>(sum[2]) / static_cast<double>(count));
    if (std::find(colors.begin(), colors.end(), mean) == colors.end()) colors.push_back(mean);
  }
  return Palette(std::move(colors));
}

NearestColor::NearestColor(const Palette& palette) : colors_(palette.colors().begin(), palette.colors().end()) {
  cell_start_.reserve(kCells * kCells * kCells + 1);
  constexpr double kWidth = 1 << kCellBits;
  for (int cr = 0; cr < kCells; ++cr) {
    for (int cg = 0; cg < kCells; ++cg) {
      for (int cb = 0; cb < kCells; ++cb) {
        const std::array<int, 3> cell = {cr, cg, cb};
        std::array<double, 3> lo{}, hi{};
        for (int k = 0; k < 3; ++k) {
          lo[k] = cell[k] * kWidth;
          hi[k] = std::min(255.0, lo[k] + kWidth);
        }
        auto bounds = [&](const Rgb& c, double& near, double& far) {
          near = far = 0.0;
          const std::array<double, 3> v = {double(c.r), double(c.g), double(c.b)};
          for (int k = 0; k < 3; ++k) {
            const double dn = v[k] < lo[k] ? lo[k] - v[k] : v[k] > hi[k] ? v[k] - hi[k] : 0.0;
            const double df = std::max(std::abs(v[k] - lo[k]), std::abs(v[k] - hi[k]));
            near += dn * dn;
            far += df * df;
          }
        };
        double bound = std::numeric_limits<double>::infinity();
        for (const Rgb& c : colors_) {
          double near, far;
          bounds(c, near, far);
          bound = std::min(bound, far);
        }
        cell_start_.push_back(static_cast<std::uint32_t>(candidates_.size()));
        for (std::size_t i = 0; i < colors_.size(); ++i) {
          double near, far;
          bounds(colors_[i], near, far);
          if (near <= bound) candidates_.push_back(static_cast<std::uint16_t>(i));
        }
      }
    }
  }
  cell_start_.push_back(static_cast<std::uint32_t>(candidates_.size()));
}

std::size_t NearestColor::operator()(double r, double g, double b) const {
  auto cell_of = [](double v) { return std::clamp(static_cast<int>(v) >> kCellBits, 0, kCells - 1); };
  const std::size_t cell =
      (static_cast<std::size_t>(cell_of(r)) * kCells + static_cast<std::size_t>(cell_of(g))) * kCells +
      static_cast<std::size_t>(cell_of(b));
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
    const Rgb& c = colors_[candidates_[k]];
    const double dr = r - c.r, dg = g - c.g, db = b - c.b;
    const double d = dr * dr + dg * dg + db * db;
    if (d < best_d) {
      best_d = d;
      best = candidates_[k];
    }
  }
  return best;
}

RasterImage dither_floyd_steinberg(const RasterImage& img, const Palette& palette, double scale) {
  if (!(scale >= 0.0 && scale <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "dither scale must be in [0, 1]");
  if (palette.size() == 0) throw Error(ErrorCode::InvalidConfig, "empty palette");

  const NearestColor nearest(palette);
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const double w_right = scale * 7.0 / 16.0;
  const double w_below_left = scale * 3.0 / 16.0;
  const double w_below = scale * 5.0 / 16.0;
  const double w_below_right = scale * 1.0 / 16.0;

  // Pending diffused error for the current and the next row.
  Eigen::Array<double, Eigen::Dynamic, 3, Eigen::RowMajor> cur = decltype(cur)::Zero(static_cast<Eigen::Index>(w), 3);
  decltype(cur) next = decltype(cur)::Zero(static_cast<Eigen::Index>(w), 3);

  RasterImage out = img;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto xi = static_cast<Eigen::Index>(x);
      std::array<double, 3> v{};
      for (int c = 0; c < 3; ++c)
        v[static_cast<std::size_t>(c)] = std::clamp(img.at(x, y, static_cast<std::size_t>(c)) + cur(xi, c), 0.0, 255.0);
      const Rgb& chosen = palette[nearest(v[0], v[1], v[2])];
      out.at(x, y, 0) = chosen.r;
      out.at(x, y, 1) = chosen.g;
      out.at(x, y, 2) = chosen.b;
      if (scale == 0.0) continue;
      const std::array<double, 3> err = {v[0] - chosen.r, v[1] - chosen.g, v[2] - chosen.b};
      for (int c = 0; c < 3; ++c) {
        const double e = err[static_cast<std::size_t>(c)];
        if (x + 1 < w) cur(xi + 1, c) += e * w_right;
        if (y + 1 < h) {
          if (x > 0) next(xi - 1, c) += e * w_below_left;
          next(xi, c) += e * w_below;
          if (x + 1 < w) next(xi + 1, c) += e * w_below_right;
        }
      }
    }
    cur.swap(next);
    next.setZero();
  }
  return out;
}

std::pair<RasterImage, Palette> quantize_for_storage(const RasterImage& img, const DitherConfig& cfg) {
  cfg.validate();
  Palette palette = median_cut(img, cfg.palette_size);
  RasterImage out = dither_floyd_steinberg(img, palette, cfg.scale);
  return {std::move(out), std::move(palette)};
}

}  // namespace greenstore
