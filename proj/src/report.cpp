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

#include "greenstore/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "greenstore/error.hpp"

namespace greenstore {
namespace {

std::string render(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths;
  for (const auto& row : cells) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    os << line << '\n';
  }
  return os.str();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string trim_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double parse_size_tb(const std::string& text, TbMode mode) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "bad size '" + text + "'");
  }
  std::string unit = text.substr(pos);
  std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::toupper(c); });
  static const std::vector<std::string> ladder = {"B", "KB", "MB", "GB", "TB", "PB"};
  const auto it = std::find(ladder.begin(), ladder.end(), unit);
  if (it == ladder.end() || !(value >= 0.0)) throw Error(ErrorCode::InvalidConfig, "bad size '" + text + "'");
  const int exponent = static_cast<int>(it - ladder.begin()) - 4;  // relative to TB
  const double base = mode == TbMode::Binary ? 1024.0 : 1000.0;
  return value * std::pow(base, exponent);
}

std::string format_quantity(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  if (std::abs(v) < 1.0)
    std::snprintf(buf, sizeof buf, "%.3e", v);
  else
    std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<EnergyRow> energy_rows(std::span<const EvaluationRow> rows, double carbon_g_per_kwh, TbMode mode) {
  std::vector<EnergyRow> out;
  for (const auto& row : rows) {
    for (auto arch : {Architecture::Distributed, Architecture::Centralized}) {
      EnergyRow e;
      e.dataset = row.dataset;
      e.dither_scale = row.config.scale;
      e.scenario = EnergyScenario::for_architecture(bytes_to_tb(static_cast<double>(row.report.original_bytes), mode),
                                                    arch, carbon_g_per_kwh);
      SavingsOptions opts;
      opts.tb_mode = mode;
      opts.allow_negative = true;
      e.report = savings_report(row.report.original_bytes, row.report.stored_bytes, arch, carbon_g_per_kwh, opts);
      out.push_back(e);
    }
  }
  return out;
}

std::string format_quality_table(std::span<const EvaluationRow> rows) {
  std::vector<std::vector<std::string>> cells = {
      {"Dataset", "Dither", "PSNR", "SSIM", "Stored size", "Compression percentage"}};
  for (const auto& r : rows) {
    const std::string psnr = std::isinf(r.report.psnr_db) ? "inf" : fixed(r.report.psnr_db, 2) + " db";
    cells.push_back({r.dataset, trim_number(r.config.scale), psnr, fixed(r.report.ssim, 5),
                     fixed(static_cast<double>(r.report.stored_bytes) / 1048576.0, 4),
                     fixed(r.report.compression_pct, 4)});
  }
  return render(cells);
}

std::string format_energy_table(std::span<const EnergyRow> rows) {
  std::vector<std::vector<std::string>> cells = {
      {"Dataset", "Dither", "Architecture", "Initial kWh", "Final kWh", "Savings kWh", "CO2 saved g"}};
  for (const auto& r : rows)
    cells.push_back({r.dataset, trim_number(r.dither_scale), std::string(to_string(r.scenario.architecture)),
                     format_quantity(r.report.initial_kwh), format_quantity(r.report.final_kwh),
                     format_quantity(r.report.savings_kwh), format_quantity(r.report.carbon_saved_g)});
  return render(cells);
}

std::string format_projection(double original_tb, double fraction, const Projection& p) {
  std::ostringstream os;
  os << "Projection for " << trim_number(original_tb) << " TB at " << trim_number(fraction * 100.0)
     << "% compression:\n"
     << "  energy saved per year: " << fixed(p.kwh_distributed, 3) << " kWh distributed, "
     << fixed(p.kwh_centralized, 3) << " kWh centralized\n"
     << "  carbon saved per year: " << fixed(p.carbon_kg_distributed, 3) << " kg distributed, "
     << fixed(p.carbon_kg_centralized, 3) << " kg centralized\n";
  return os.str();
}

nlohmann::json energy_rows_to_json(std::span<const EnergyRow> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"dataset", r.dataset}, {"dither_scale", r.dither_scale}, {"scenario", r.scenario}, {"report", r.report}});
  return arr;
}

}  // namespace greenstore
