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

#ifndef GREENSTORE_REPORT_HPP
#define GREENSTORE_REPORT_HPP

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenstore/archive.hpp"
#include "greenstore/energy.hpp"

namespace greenstore {

/// Parses "<number><unit>" (B, KB, MB, GB, TB, PB; case-insensitive) into
/// terabytes using the binary or decimal ladder. InvalidConfig on bad input.
double parse_size_tb(const std::string& text, TbMode mode);

/// Compact number for report output: three decimals, scientific below 1.
std::string format_quantity(double v);

struct EnergyRow {
  std::string dataset;
  double dither_scale = 0.0;
  EnergyScenario scenario;  // stored_tb is the original size
  EnergyReport report;
};

std::vector<EnergyRow> energy_rows(std::span<const EvaluationRow> rows, double carbon_g_per_kwh, TbMode mode);

/// Aligned text table with the columns Dataset, Dither, PSNR, SSIM,
/// Stored size (MB), Compression percentage.
std::string format_quality_table(std::span<const EvaluationRow> rows);
std::string format_energy_table(std::span<const EnergyRow> rows);
std::string format_projection(double original_tb, double fraction, const Projection& p);

nlohmann::json energy_rows_to_json(std::span<const EnergyRow> rows);

}  // namespace greenstore

#endif  // GREENSTORE_REPORT_HPP
