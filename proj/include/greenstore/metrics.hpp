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

#ifndef GREENSTORE_METRICS_HPP
#define GREENSTORE_METRICS_HPP

#include <cstdint>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "greenstore/raster.hpp"

namespace greenstore {

/// Returned by psnr() for identical images; serialised as "inf".
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// Mean squared error over every sample of every channel.
double mse(const RasterImage& a, const RasterImage& b);

/// 10 log10(255^2 / MSE) in dB; kInfinitePsnr when MSE is zero.
/// Throws ShapeMismatch when dimensions or channel counts differ.
double psnr(const RasterImage& a, const RasterImage& b);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

/// Mean SSIM over the valid-region map of BT.601 luma, Gaussian window.
/// Throws ShapeMismatch on differing sizes, TooSmall when either dimension is
/// below the window size.
double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params = {});

/// 100 * (1 - stored / original). DivideByZero when original is zero.
double compression_percentage(double original_bytes, double stored_bytes);

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::uint64_t original_bytes = 0;
  std::uint64_t stored_bytes = 0;
  double compression_pct = 0.0;

  friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

/// "inf" for the infinite sentinel, the plain number otherwise.
nlohmann::json psnr_to_json(double psnr_db);
double psnr_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const QualityReport& r);
void from_json(const nlohmann::json& j, QualityReport& r);

}  // namespace greenstore

#endif  // GREENSTORE_METRICS_HPP
