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

#include "greenstore/metrics.hpp"

#include <cmath>

#include <Eigen/SparseCore>

#include "greenstore/error.hpp"

namespace greenstore {
namespace {

void require_same_shape(const RasterImage& a, const RasterImage& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) + "x" +
                                              std::to_string(a.channels()) + " vs " + std::to_string(b.width()) +
                                              "x" + std::to_string(b.height()) + "x" + std::to_string(b.channels()));
}

// (n - window + 1) x n banded matrix applying a normalised 1-D Gaussian over
// every fully-contained window position.
Eigen::SparseMatrix<double, Eigen::RowMajor> valid_gaussian(Eigen::Index n, int window, double sigma) {
  std::vector<double> taps(static_cast<std::size_t>(window));
  const double mid = (window - 1) / 2.0;
  double total = 0.0;
  for (int k = 0; k < window; ++k) {
    taps[static_cast<std::size_t>(k)] = std::exp(-((k - mid) * (k - mid)) / (2.0 * sigma * sigma));
    total += taps[static_cast<std::size_t>(k)];
  }
  for (double& t : taps) t /= total;
  const Eigen::Index rows = n - window + 1;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(rows * window));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (int k = 0; k < window; ++k) triplets.emplace_back(i, i + k, taps[static_cast<std::size_t>(k)]);
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(rows, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

double mse(const RasterImage& a, const RasterImage& b) {
  require_same_shape(a, b);
  const auto da = a.data();
  const auto db = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(da.size());
}

double psnr(const RasterImage& a, const RasterImage& b) {
  const double m = mse(a, b);
  if (m == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params) {
  require_same_shape(a, b);
  const auto win = static_cast<std::size_t>(params.window);
  if (a.width() < win || a.height() < win)
    throw Error(ErrorCode::TooSmall, "SSIM needs at least " + std::to_string(win) + "x" + std::to_string(win));

  const Plane<double> x = luma<double>(a);
  const Plane<double> y = luma<double>(b);
  const auto gv = valid_gaussian(x.rows(), params.window, params.sigma);
  const auto gh = valid_gaussian(x.cols(), params.window, params.sigma);
  auto filter = [&](const Plane<double>& p) -> Plane<double> {
    const Plane<double> t = (gh * p.transpose()).transpose();
    return gv * t;
  };

  const Plane<double> mx = filter(x);
  const Plane<double> my = filter(y);
  const Plane<double> sxx = filter(x.cwiseProduct(x)) - mx.cwiseProduct(mx);
  const Plane<double> syy = filter(y.cwiseProduct(y)) - my.cwiseProduct(my);
  const Plane<double> sxy = filter(x.cwiseProduct(y)) - mx.cwiseProduct(my);

  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
  const auto num = (2.0 * mx.cwiseProduct(my).array() + c1) * (2.0 * sxy.array() + c2);
  const auto den = (mx.cwiseProduct(mx).array() + my.cwiseProduct(my).array() + c1) * (sxx.array() + syy.array() + c2);
  return (num / den).mean();
}

double compression_percentage(double original_bytes, double stored_bytes) {
  if (original_bytes == 0.0) throw Error(ErrorCode::DivideByZero, "original size is zero");
  return 100.0 * (1.0 - stored_bytes / original_bytes);
}

nlohmann::json psnr_to_json(double psnr_db) {
  if (std::isinf(psnr_db) && psnr_db > 0) return "inf";
  return psnr_db;
}

double psnr_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinitePsnr;
  return j.get<double>();
}

void to_json(nlohmann::json& j, const QualityReport& r) {
  j = nlohmann::json{{"psnr_db", psnr_to_json(r.psnr_db)},
                     {"ssim", r.ssim},
                     {"original_bytes", r.original_bytes},
                     {"stored_bytes", r.stored_bytes},
                     {"compression_pct", r.compression_pct}};
}

void from_json(const nlohmann::json& j, QualityReport& r) {
  r.psnr_db = psnr_from_json(j.at("psnr_db"));
  r.ssim = j.at("ssim").get<double>();
  r.original_bytes = j.at("original_bytes").get<std::uint64_t>();
  r.stored_bytes = j.at("stored_bytes").get<std::uint64_t>();
  r.compression_pct = j.at("compression_pct").get<double>();
}

}  // namespace greenstore
