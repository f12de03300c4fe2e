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

#include "greenstore/png.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "greenstore/deflate.hpp"
#include "greenstore/error.hpp"

namespace greenstore {

Palette::Palette(std::vector<Rgb> colors) : colors_(std::move(colors)) {
  if (colors_.empty() || colors_.size() > kMaxSize)
    throw Error(ErrorCode::InvalidConfig, "palette must hold 1..256 colors, got " + std::to_string(colors_.size()));
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if (!index_.emplace(colors_[i].packed(), static_cast<std::uint8_t>(i)).second)
      throw Error(ErrorCode::InvalidConfig, "palette contains a duplicate color");
  }
}

std::optional<std::uint8_t> Palette::index_of(Rgb c) const {
  const auto it = index_.find(c.packed());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) | (std::uint32_t{b[off + 2]} << 8) |
         b[off + 3];
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void write_chunk(std::vector<std::uint8_t>& out, const char (&type)[5], std::span<const std::uint8_t> payload) {
  put_be32(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  put_be32(out, crc32(std::span<const std::uint8_t>(out).subspan(start)));
}

int index_bit_depth(std::size_t palette_size) {
  if (palette_size <= 2) return 1;
  if (palette_size <= 4) return 2;
  if (palette_size <= 16) return 4;
  return 8;
}

}  // namespace

std::uint64_t filter_cost(std::span<const std::uint8_t> filtered) {
  std::uint64_t sum = 0;
  for (auto b : filtered) sum += b < 128 ? b : 256u - b;
  return sum;
}

void apply_filter(FilterType type, std::span<const std::uint8_t> row, std::span<const std::uint8_t> prev,
                  std::size_t bpp, std::span<std::uint8_t> out) {
  const std::size_t n = row.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int a = i >= bpp ? row[i - bpp] : 0;
    const int b = prev[i];
    const int c = i >= bpp ? prev[i - bpp] : 0;
    int pred = 0;
    switch (type) {
      case FilterType::None: pred = 0; break;
      case FilterType::Sub: pred = a; break;
      case FilterType::Up: pred = b; break;
      case FilterType::Average: pred = (a + b) / 2; break;
      case FilterType::Paeth: pred = paeth(a, b, c); break;
    }
    out[i] = static_cast<std::uint8_t>(row[i] - pred);
  }
}

std::vector<std::uint8_t> filter_scanlines(std::span<const std::uint8_t> rows, std::size_t row_bytes,
                                           std::size_t bpp, FilterStrategy strategy) {
  const std::size_t height = row_bytes == 0 ? 0 : rows.size() / row_bytes;
  std::vector<std::uint8_t> out;
  out.reserve(height * (row_bytes + 1));
  const std::vector<std::uint8_t> zeros(row_bytes, 0);
  std::vector<std::uint8_t> candidate(row_bytes);
  std::vector<std::uint8_t> best(row_bytes);
  for (std::size_t y = 0; y < height; ++y) {
    const auto row = rows.subspan(y * row_bytes, row_bytes);
    const auto prev = y == 0 ? std::span<const std::uint8_t>(zeros) : rows.subspan((y - 1) * row_bytes, row_bytes);
    FilterType chosen = strategy.fixed;
    if (strategy.adaptive) {
      std::uint64_t best_cost = UINT64_MAX;
      for (std::uint8_t t = 0; t < 5; ++t) {
        apply_filter(static_cast<FilterType>(t), row, prev, bpp, candidate);
        const std::uint64_t cost = filter_cost(candidate);
        if (cost < best_cost) {
          best_cost = cost;
          chosen = static_cast<FilterType>(t);
          best.swap(candidate);
        }
      }
    } else {
      apply_filter(chosen, row, prev, bpp, best);
    }
    out.push_back(static_cast<std::uint8_t>(chosen));
    out.insert(out.end(), best.begin(), best.end());
  }
  return out;
}

std::vector<std::uint8_t> unfilter_scanlines(std::span<const std::uint8_t> stream, std::size_t row_bytes,
                                             std::size_t height, std::size_t bpp) {
  if (stream.size() < height * (row_bytes + 1)) throw Error(ErrorCode::CorruptInput, "image data too short");
  std::vector<std::uint8_t> out(height * row_bytes);
  const std::vector<std::uint8_t> zeros(row_bytes, 0);
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t type = stream[y * (row_bytes + 1)];
    const auto in = stream.subspan(y * (row_bytes + 1) + 1, row_bytes);
    std::uint8_t* cur = out.data() + y * row_bytes;
    const std::uint8_t* prev = y == 0 ? zeros.data() : out.data() + (y - 1) * row_bytes;
    for (std::size_t i = 0; i < row_bytes; ++i) {
      const int a = i >= bpp ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      int pred = 0;
      switch (type) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: pred = paeth(a, b, c); break;
        default: throw Error(ErrorCode::CorruptInput, "invalid filter type " + std::to_string(type));
      }
      cur[i] = static_cast<std::uint8_t>(in[i] + pred);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img, const std::optional<Palette>& palette,
                                     const EncodeParams& params) {
  if (params.compression_effort < 1 || params.compression_effort > 9)
    throw Error(ErrorCode::InvalidConfig, "compression effort must be in [1, 9]");
  if (img.empty()) throw Error(ErrorCode::InvalidConfig, "cannot encode an empty image");

  const bool indexed = palette.has_value() && params.palette_mode;
  std::uint8_t color_type = img.has_alpha() ? 6 : 2;
  int bit_depth = 8;
  std::size_t row_bytes = img.stride();
  std::size_t bpp = img.channels();
  std::vector<std::uint8_t> raw;

  if (indexed) {
    if (img.has_alpha()) throw Error(ErrorCode::InvalidConfig, "indexed output requires an RGB image");
    color_type = 3;
    bit_depth = index_bit_depth(palette->size());
    const std::size_t per_byte = 8 / static_cast<std::size_t>(bit_depth);
    row_bytes = (img.width() + per_byte - 1) / per_byte;
    bpp = 1;
    raw.assign(row_bytes * img.height(), 0);
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        const Rgb c{img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)};
        const auto idx = palette->index_of(c);
        if (!idx)
          throw Error(ErrorCode::PaletteMismatch, "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                                       ") is not a palette color");
        const std::size_t shift = 8 - static_cast<std::size_t>(bit_depth) * (x % per_byte + 1);
        raw[y * row_bytes + x / per_byte] |= static_cast<std::uint8_t>(*idx << shift);
      }
    }
  } else {
    raw.assign(img.data().begin(), img.data().end());
  }

  const auto filtered = filter_scanlines(raw, row_bytes, bpp, params.filter);
  const auto idat = zlib_compress(filtered, params.compression_effort);

  std::vector<std::uint8_t> out(kSignature.begin(), kSignature.end());
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(img.width()));
  put_be32(ihdr, static_cast<std::uint32_t>(img.height()));
  ihdr.insert(ihdr.end(), {static_cast<std::uint8_t>(bit_depth), color_type, 0, 0, 0});
  write_chunk(out, "IHDR", ihdr);
  if (indexed) {
    std::vector<std::uint8_t> plte;
    for (const Rgb& c : palette->colors()) plte.insert(plte.end(), {c.r, c.g, c.b});
    write_chunk(out, "PLTE", plte);
  }
  write_chunk(out, "IDAT", idat);
  write_chunk(out, "IEND", {});
  return out;
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSignature.size() || !std::equal(kSignature.begin(), kSignature.end(), bytes.begin()))
    throw Error(ErrorCode::CorruptInput, "missing PNG signature");

  std::size_t width = 0, height = 0;
  int bit_depth = 0, color_type = -1;
  std::vector<Rgb> plte;
  std::vector<std::uint8_t> palette_alpha;
  std::optional<std::array<std::uint16_t, 3>> color_key;
  std::vector<std::uint8_t> idat;
  bool seen_ihdr = false, seen_iend = false;

  std::size_t off = kSignature.size();
  while (!seen_iend) {
    if (off + 12 > bytes.size()) throw Error(ErrorCode::CorruptInput, "truncated chunk header");
    const std::uint32_t len = read_be32(bytes, off);
    if (len > 0x7FFFFFFFu || off + 12 + len > bytes.size()) throw Error(ErrorCode::CorruptInput, "truncated chunk");
    const auto type_and_data = bytes.subspan(off + 4, 4 + len);
    if (crc32(type_and_data) != read_be32(bytes, off + 8 + len))
      throw Error(ErrorCode::CorruptInput, "chunk CRC mismatch");
    const std::string type(type_and_data.begin(), type_and_data.begin() + 4);
    const auto data = type_and_data.subspan(4);
    off += 12 + len;

    if (!seen_ihdr && type != "IHDR") throw Error(ErrorCode::CorruptInput, "first chunk is not IHDR");
    if (type == "IHDR") {
      if (seen_ihdr || len != 13) throw Error(ErrorCode::CorruptInput, "bad IHDR");
      seen_ihdr = true;
      width = read_be32(data, 0);
      height = read_be32(data, 4);
      bit_depth = data[8];
      color_type = data[9];
      if (width == 0 || height == 0 || width > (1u << 24) || height > (1u << 24))
        throw Error(ErrorCode::CorruptInput, "bad image dimensions");
      if (data[10] != 0 || data[11] != 0) throw Error(ErrorCode::CorruptInput, "unknown compression/filter method");
      if (data[12] == 1) throw Error(ErrorCode::Unsupported, "interlaced PNG");
      if (data[12] != 0) throw Error(ErrorCode::CorruptInput, "unknown interlace method");
      const bool valid = (color_type == 0 && (bit_depth == 1 || bit_depth == 2 || bit_depth == 4 ||
                                              bit_depth == 8 || bit_depth == 16)) ||
                         (color_type == 3 && (bit_depth == 1 || bit_depth == 2 || bit_depth == 4 || bit_depth == 8)) ||
                         ((color_type == 2 || color_type == 4 || color_type == 6) && (bit_depth == 8 || bit_depth == 16));
      if (!valid) throw Error(ErrorCode::CorruptInput, "invalid bit depth / color type combination");
      if (bit_depth == 16) throw Error(ErrorCode::Unsupported, "16-bit PNG");
    } else if (type == "PLTE") {
      if (len % 3 != 0 || len == 0 || len / 3 > 256) throw Error(ErrorCode::CorruptInput, "bad PLTE");
      plte.clear();
      for (std::size_t i = 0; i < len; i += 3) plte.push_back({data[i], data[i + 1], data[i + 2]});
    } else if (type == "tRNS") {
      if (color_type == 3) {
        palette_alpha.assign(data.begin(), data.end());
      } else if (color_type == 0 && len == 2) {
        const auto v = static_cast<std::uint16_t>((data[0] << 8) | data[1]);
        color_key = std::array<std::uint16_t, 3>{v, v, v};
      } else if (color_type == 2 && len == 6) {
        color_key = std::array<std::uint16_t, 3>{static_cast<std::uint16_t>((data[0] << 8) | data[1]),
                                                 static_cast<std::uint16_t>((data[2] << 8) | data[3]),
                                                 static_cast<std::uint16_t>((data[4] << 8) | data[5])};
      }
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data.begin(), data.end());
    } else if (type == "IEND") {
      seen_iend = true;
    } else if ((type[0] & 0x20) == 0) {
      throw Error(ErrorCode::Unsupported, "unknown critical chunk " + type);
    }
  }
  if (idat.empty()) throw Error(ErrorCode::CorruptInput, "no image data");
  if (color_type == 3 && plte.empty()) throw Error(ErrorCode::CorruptInput, "indexed image without PLTE");

  const std::size_t samples = color_type == 2 ? 3 : color_type == 4 ? 2 : color_type == 6 ? 4 : 1;
  const std::size_t bits_per_pixel = samples * static_cast<std::size_t>(bit_depth);
  const std::size_t row_bytes = (width * bits_per_pixel + 7) / 8;
  const std::size_t bpp = std::max<std::size_t>(1, bits_per_pixel / 8);
  const auto stream = zlib_decompress(idat);
  const auto raw = unfilter_scanlines(stream, row_bytes, height, bpp);

  auto sample_at = [&](std::size_t y, std::size_t x) -> std::uint8_t {
    // Sub-byte samples are packed MSB first.
    const std::size_t bit = x * static_cast<std::size_t>(bit_depth);
    const std::uint8_t byte = raw[y * row_bytes + bit / 8];
    const std::size_t shift = 8 - static_cast<std::size_t>(bit_depth) - bit % 8;
    return static_cast<std::uint8_t>((byte >> shift) & ((1u << bit_depth) - 1));
  };

  const bool alpha = color_type == 4 || color_type == 6 || (color_type == 3 && !palette_alpha.empty()) ||
                     (color_key.has_value() && (color_type == 0 || color_type == 2));
  RasterImage img(width, height, alpha ? 4 : 3);
  const std::uint32_t gray_scale = 255u / ((1u << bit_depth) - 1u);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      std::array<std::uint8_t, 4> px{0, 0, 0, 255};
      switch (color_type) {
        case 0: {
          const std::uint8_t v = sample_at(y, x);
          const auto g = static_cast<std::uint8_t>(v * gray_scale);
          px = {g, g, g, static_cast<std::uint8_t>(color_key && (*color_key)[0] == v ? 0 : 255)};
          break;
        }
        case 2: {
          const std::uint8_t* p = &raw[y * row_bytes + x * 3];
          const bool keyed = color_key && (*color_key)[0] == p[0] && (*color_key)[1] == p[1] && (*color_key)[2] == p[2];
          px = {p[0], p[1], p[2], static_cast<std::uint8_t>(keyed ? 0 : 255)};
          break;
        }
        case 3: {
          const std::uint8_t idx = sample_at(y, x);
          if (idx >= plte.size()) throw Error(ErrorCode::CorruptInput, "palette index out of range");
          const Rgb c = plte[idx];
          px = {c.r, c.g, c.b, idx < palette_alpha.size() ? palette_alpha[idx] : std::uint8_t{255}};
          break;
        }
        case 4: {
          const std::uint8_t* p = &raw[y * row_bytes + x * 2];
          px = {p[0], p[0], p[0], p[1]};
          break;
        }
        case 6: {
          const std::uint8_t* p = &raw[y * row_bytes + x * 4];
          px = {p[0], p[1], p[2], p[3]};
          break;
        }
        default: break;
      }
      for (std::size_t c = 0; c < img.channels(); ++c) img.at(x, y, c) = px[c];
    }
  }
  return img;
}

StorageSizes measure_sizes(std::span<const std::uint8_t> original, std::span<const std::uint8_t> stored) {
  return {original.size(), stored.size()};
}

StorageSizes measure_sizes(std::span<const std::filesystem::path> originals,
                           std::span<const std::filesystem::path> stored) {
  StorageSizes s;
  try {
    for (const auto& p : originals) s.original_bytes += std::filesystem::file_size(p);
    for (const auto& p : stored) s.stored_bytes += std::filesystem::file_size(p);
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorCode::NotFound, e.what());
  }
  return s;
}

}  // namespace greenstore
