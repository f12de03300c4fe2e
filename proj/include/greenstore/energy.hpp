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

#ifndef GREENSTORE_ENERGY_HPP
#define GREENSTORE_ENERGY_HPP

#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

namespace greenstore {

enum class Architecture { Distributed, Centralized };
enum class TbMode { Binary, Decimal };

std::string_view to_string(Architecture a) noexcept;
std::string_view to_string(TbMode m) noexcept;

inline constexpr double kDistributedWattsPerTb = 2.55;
inline constexpr double kCentralizedWattsPerTb = 11.55;
inline constexpr double kDefaultCarbonGramsPerKwh = 500.0;
inline constexpr double kHoursPerYear = 365.0 * 24.0;

double default_power_per_tb(Architecture a) noexcept;

/// Bytes in one terabyte: 2^40 (binary) or 10^12 (decimal).
double bytes_per_tb(TbMode mode) noexcept;
double bytes_to_tb(double bytes, TbMode mode) noexcept;

struct EnergyScenario {
  double stored_tb = 0.0;
  Architecture architecture = Architecture::Distributed;
  double power_per_tb_w = kDistributedWattsPerTb;
  double carbon_g_per_kwh = kDefaultCarbonGramsPerKwh;

  static EnergyScenario for_architecture(double stored_tb, Architecture a,
                                         double carbon_g_per_kwh = kDefaultCarbonGramsPerKwh) {
    return {stored_tb, a, default_power_per_tb(a), carbon_g_per_kwh};
  }
  /// InvalidConfig for a negative size, non-positive power or negative carbon factor.
  void validate() const;
};

/// Watts per TB held for a year, in kWh: power * 365 * 24 * S / 1000.
double annual_energy_kwh(const EnergyScenario& scenario);

struct EnergyReport {
  double initial_kwh = 0.0;
  double final_kwh = 0.0;
  double savings_kwh = 0.0;
  double carbon_saved_g = 0.0;
};

struct SavingsOptions {
  TbMode tb_mode = TbMode::Binary;
  // Report stored > original as negative savings instead of failing.
  bool allow_negative = false;
};

/// Annual energy before/after storing `stored_bytes` in place of
/// `original_bytes`. InvalidConfig when stored exceeds original unless
/// allow_negative is set.
EnergyReport savings_report(std::uint64_t original_bytes, std::uint64_t stored_bytes, Architecture architecture,
                            double carbon_g_per_kwh = kDefaultCarbonGramsPerKwh, const SavingsOptions& options = {});

/// Same model with sizes already expressed in TB.
EnergyReport savings_report_tb(double original_tb, double stored_tb, Architecture architecture,
                               double carbon_g_per_kwh = kDefaultCarbonGramsPerKwh, bool allow_negative = false);

struct Projection {
  double kwh_distributed = 0.0;
  double kwh_centralized = 0.0;
  double carbon_kg_distributed = 0.0;
  double carbon_kg_centralized = 0.0;
};

/// Yearly savings if `compression_fraction` of `original_tb` no longer needs storing.
Projection projection(double original_tb, double compression_fraction,
                      double carbon_g_per_kwh = kDefaultCarbonGramsPerKwh);

void to_json(nlohmann::json& j, const EnergyReport& r);
void from_json(const nlohmann::json& j, EnergyReport& r);
void to_json(nlohmann::json& j, const EnergyScenario& s);
void to_json(nlohmann::json& j, const Projection& p);

}  // namespace greenstore

#endif  // GREENSTORE_ENERGY_HPP
