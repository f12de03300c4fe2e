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

#ifndef GREENSTORE_RESAMPLE_HPP
#define GREENSTORE_RESAMPLE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>

#include <Eigen/SparseCore>

#include "greenstore/raster.hpp"

namespace greenstore {

template <typename Scalar>
Scalar sinc(Scalar x) {
  if (x == Scalar(0)) return Scalar(1);
  const Scalar px = std::numbers::pi_v<Scalar> * x;
  return std::sin(px) / px;
}

/// Lanczos kernel with a = 3: sinc(x) * sinc(x / 3) inside |x| < 3, else 0.
template <typename Scalar>
Scalar lanczos3(Scalar x) {
  using std::abs;
  if (abs(x) >= Scalar(3)) return Scalar(0);
  // Exact zeros at the nonzero integers.
  if (x != Scalar(0) && x == std::trunc(x)) return Scalar(0);
  return sinc(x) * sinc(x / Scalar(3));
}

template <typename Scalar>
using WeightMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// out_size x in_size matrix mapping one source line onto the output grid.
///
/// Pixel centres are aligned ((i + 0.5) * in/out - 0.5); when shrinking the
/// kernel is stretched by in/out. Taps falling outside the source are
/// clamped onto the edge pixel and each row is normalised to sum to one.
template <typename Scalar>
WeightMatrix<Scalar> lanczos3_weights(std::size_t in_size, std::size_t out_size) {
  const Scalar ratio = Scalar(in_size) / Scalar(out_size);
  const Scalar stretch = ratio > Scalar(1) ? ratio : Scalar(1);
  const Scalar support = Scalar(3) * stretch;
  const auto last = static_cast<long long>(in_size) - 1;

  std::vector<Eigen::Triplet<Scalar>> triplets;
  std::vector<Scalar> row;
  for (std::size_t i = 0; i < out_size; ++i) {
    const Scalar center = (Scalar(i) + Scalar(0.5)) * ratio - Scalar(0.5);
    const auto first = static_cast<long long>(std::floor(center - support));
    const auto stop = static_cast<long long>(std::ceil(center + support));
    row.assign(in_size, Scalar(0));
    Scalar total = 0;
    for (long long j = first; j <= stop; ++j) {
      const Scalar w = lanczos3((Scalar(j) - center) / stretch);
      if (w == Scalar(0)) continue;
      row[static_cast<std::size_t>(std::clamp(j, 0LL, last))] += w;
      total += w;
    }
    for (std::size_t j = 0; j < in_size; ++j)
      if (row[j] != Scalar(0)) triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), row[j] / total);
  }
  WeightMatrix<Scalar> m(static_cast<Eigen::Index>(out_size), static_cast<Eigen::Index>(in_size));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

/// Separable Lanczos3 resize of one plane: horizontal pass, then vertical.
/// No rounding happens between the passes.
template <typename Scalar>
Plane<Scalar> resize_plane(const Plane<Scalar>& src, std::size_t width, std::size_t height) {
  const auto horiz = lanczos3_weights<Scalar>(static_cast<std::size_t>(src.cols()), width);
  const auto vert = lanczos3_weights<Scalar>(static_cast<std::size_t>(src.rows()), height);
  const Plane<Scalar> wide = (horiz * src.transpose()).transpose();
  return vert * wide;
}

struct ResampleSpec {
  // output_dim = round(input_dim * numerator / denominator)
  std::size_t numerator = 1;
  std::size_t denominator = 1;
};

/// Resize to explicit dimensions. Every channel (alpha included) is filtered
/// independently. Throws InvalidConfig for a zero target dimension.
RasterImage resize_to(const RasterImage& img, std::size_t width, std::size_t height);
RasterImage resize(const RasterImage& img, ResampleSpec spec);

/// ceil(dim / 4) in both axes; TooSmall below 4x4.
RasterImage downscale_4x(const RasterImage& img);
RasterImage upscale_4x(const RasterImage& img);

/// Point-sampling 4x round trip baseline used for comparisons.
RasterImage nearest_downscale_4x(const RasterImage& img);
RasterImage nearest_upscale_4x(const RasterImage& img);

}  // namespace greenstore

#endif  // GREENSTORE_RESAMPLE_HPP
