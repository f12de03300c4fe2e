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

#include "greenstore/energy.hpp"

#include <string>

#include "greenstore/error.hpp"

namespace greenstore {

std::string_view to_string(Architecture a) noexcept {
  return a == Architecture::Distributed ? "distributed" : "centralized";
}

std::string_view to_string(TbMode m) noexcept { return m == TbMode::Binary ? "binary" : "decimal"; }

double default_power_per_tb(Architecture a) noexcept {
  return a == Architecture::Distributed ? kDistributedWattsPerTb : kCentralizedWattsPerTb;
}

double bytes_per_tb(TbMode mode) noexcept { return mode == TbMode::Binary ? 1099511627776.0 : 1e12; }

double bytes_to_tb(double bytes, TbMode mode) noexcept { return bytes / bytes_per_tb(mode); }

void EnergyScenario::validate() const {
  if (!(stored_tb >= 0.0)) throw Error(ErrorCode::InvalidConfig, "stored size must be non-negative");
  if (!(power_per_tb_w > 0.0)) throw Error(ErrorCode::InvalidConfig, "power per TB must be positive");
  if (!(carbon_g_per_kwh >= 0.0)) throw Error(ErrorCode::InvalidConfig, "carbon factor must be non-negative");
}

double annual_energy_kwh(const EnergyScenario& scenario) {
  scenario.validate();
  // W x h x TB gives watt-hours per year; kWh is that over 1000.
  return scenario.power_per_tb_w * kHoursPerYear * scenario.stored_tb / 1000.0;
}

EnergyReport savings_report_tb(double original_tb, double stored_tb, Architecture architecture,
                               double carbon_g_per_kwh, bool allow_negative) {
  if (!(original_tb >= 0.0) || !(stored_tb >= 0.0))
    throw Error(ErrorCode::InvalidConfig, "sizes must be non-negative");
  if (stored_tb > original_tb && !allow_negative)
    throw Error(ErrorCode::InvalidConfig, "stored size exceeds original size");
  EnergyReport r;
  r.initial_kwh = annual_energy_kwh(EnergyScenario::for_architecture(original_tb, architecture, carbon_g_per_kwh));
  r.final_kwh = annual_energy_kwh(EnergyScenario::for_architecture(stored_tb, architecture, carbon_g_per_kwh));
  r.savings_kwh = r.initial_kwh - r.final_kwh;
  r.carbon_saved_g = r.savings_kwh * carbon_g_per_kwh;
  return r;
}

EnergyReport savings_report(std::uint64_t original_bytes, std::uint64_t stored_bytes, Architecture architecture,
                            double carbon_g_per_kwh, const SavingsOptions& options) {
  return savings_report_tb(bytes_to_tb(static_cast<double>(original_bytes), options.tb_mode),
                           bytes_to_tb(static_cast<double>(stored_bytes), options.tb_mode), architecture,
                           carbon_g_per_kwh, options.allow_negative);
}

Projection projection(double original_tb, double compression_fraction, double carbon_g_per_kwh) {
  if (!(compression_fraction >= 0.0 && compression_fraction <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "compression fraction must be in [0, 1]");
  if (!(original_tb >= 0.0)) throw Error(ErrorCode::InvalidConfig, "original size must be non-negative");
  const double saved_tb = compression_fraction * original_tb;
  Projection p;
  p.kwh_distributed = annual_energy_kwh(EnergyScenario::for_architecture(saved_tb, Architecture::Distributed, carbon_g_per_kwh));
  p.kwh_centralized = annual_energy_kwh(EnergyScenario::for_architecture(saved_tb, Architecture::Centralized, carbon_g_per_kwh));
  p.carbon_kg_distributed = p.kwh_distributed * carbon_g_per_kwh / 1000.0;
  p.carbon_kg_centralized = p.kwh_centralized * carbon_g_per_kwh / 1000.0;
  return p;
}

void to_json(nlohmann::json& j, const EnergyReport& r) {
  j = nlohmann::json{{"initial_kwh", r.initial_kwh},
                     {"final_kwh", r.final_kwh},
                     {"savings_kwh", r.savings_kwh},
                     {"carbon_saved_g", r.carbon_saved_g}};
}

void from_json(const nlohmann::json& j, EnergyReport& r) {
  r.initial_kwh = j.at("initial_kwh").get<double>();
  r.final_kwh = j.at("final_kwh").get<double>();
  r.savings_kwh = j.at("savings_kwh").get<double>();
  r.carbon_saved_g = j.at("carbon_saved_g").get<double>();
}

void to_json(nlohmann::json& j, const EnergyScenario& s) {
  j = nlohmann::json{{"stored_tb", s.stored_tb},
                     {"architecture", std::string(to_string(s.architecture))},
                     {"power_per_tb_w", s.power_per_tb_w},
                     {"carbon_g_per_kwh", s.carbon_g_per_kwh}};
}

void to_json(nlohmann::json& j, const Projection& p) {
  j = nlohmann::json{{"kwh_distributed", p.kwh_distributed},
                     {"kwh_centralized", p.kwh_centralized},
                     {"carbon_kg_distributed", p.carbon_kg_distributed},
                     {"carbon_kg_centralized", p.carbon_kg_centralized}};
}

}  // namespace greenstore
