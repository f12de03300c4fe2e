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

#include <doctest.h>

#include <cmath>
#include <random>

#include "greenstore/energy.hpp"
#include "greenstore/error.hpp"

using namespace greenstore;

namespace {

constexpr double kMiB = 1024.0 * 1024.0;

double original_tb() { return 428.0 / kMiB; }
double stored_tb() { return 38.7 / kMiB; }

}  // namespace

TEST_CASE("annual energy for the reference scenario") {
  const auto d = EnergyScenario::for_architecture(original_tb(), Architecture::Distributed);
  const auto c = EnergyScenario::for_architecture(original_tb(), Architecture::Centralized);
  CHECK(annual_energy_kwh(d) == doctest::Approx(2.55 * 8760 * 428 / kMiB / 1000).epsilon(1e-14));
  CHECK(annual_energy_kwh(d) * 1e3 == doctest::Approx(9.118).epsilon(5e-5));
  CHECK(annual_energy_kwh(c) * 1e3 == doctest::Approx(41.298).epsilon(5e-5));
  CHECK(annual_energy_kwh(EnergyScenario::for_architecture(0, Architecture::Centralized)) == 0.0);
}

TEST_CASE("savings report for the reference scenario") {
  const auto d = savings_report_tb(original_tb(), stored_tb(), Architecture::Distributed);
  CHECK(d.final_kwh * 1e3 == doctest::Approx(0.824).epsilon(5e-4));
  CHECK(d.savings_kwh == d.initial_kwh - d.final_kwh);
  CHECK(d.carbon_saved_g == doctest::Approx(4.147).epsilon(1e-4));
  const auto c = savings_report_tb(original_tb(), stored_tb(), Architecture::Centralized);
  CHECK(c.final_kwh * 1e3 == doctest::Approx(3.734).epsilon(1e-4));
  CHECK(c.savings_kwh * 1e3 == doctest::Approx(37.564).epsilon(5e-5));
  CHECK(c.carbon_saved_g == doctest::Approx(18.782).epsilon(5e-5));

  // The byte interface converts with 2^40 and lands on the same figures.
  const auto bytes = savings_report(448790528, 40579891, Architecture::Centralized);
  CHECK(bytes.savings_kwh == doctest::Approx(c.savings_kwh).epsilon(1e-8));
}

TEST_CASE("energy model properties") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> s(1e-9, 1e4);
  for (int i = 0; i < 200; ++i) {
    const double tb = s(rng);
    for (auto a : {Architecture::Distributed, Architecture::Centralized}) {
      const double e1 = annual_energy_kwh(EnergyScenario::for_architecture(tb, a));
      const double e2 = annual_energy_kwh(EnergyScenario::for_architecture(2 * tb, a));
      CHECK(e2 == 2 * e1);
    }
    const double ratio = annual_energy_kwh(EnergyScenario::for_architecture(tb, Architecture::Centralized)) /
                         annual_energy_kwh(EnergyScenario::for_architecture(tb, Architecture::Distributed));
    CHECK(ratio == doctest::Approx(11.55 / 2.55).epsilon(1e-13));
    const double factor = std::uniform_real_distribution<double>(0, 1000)(rng);
    const auto r = savings_report_tb(tb, tb / 3, Architecture::Distributed, factor);
    CHECK(r.carbon_saved_g == r.savings_kwh * factor);
  }
  const auto same = savings_report(5000, 5000, Architecture::Distributed);
  CHECK(same.savings_kwh == 0.0);
  CHECK(same.carbon_saved_g == 0.0);
}

TEST_CASE("energy validation") {
  CHECK_THROWS_AS(annual_energy_kwh(EnergyScenario::for_architecture(-1, Architecture::Distributed)), Error);
  CHECK_THROWS_AS(annual_energy_kwh({1.0, Architecture::Distributed, 0.0, 500}), Error);
  CHECK_THROWS_AS(annual_energy_kwh({1.0, Architecture::Distributed, 2.55, -1}), Error);
  CHECK_THROWS_AS(savings_report(10, 20, Architecture::Distributed), Error);
  const auto neg = savings_report(10, 20, Architecture::Distributed, 500, {TbMode::Binary, true});
  CHECK(neg.savings_kwh < 0);
  CHECK_THROWS_AS(projection(10, 1.5), Error);
  CHECK_THROWS_AS(projection(10, -0.1), Error);
  CHECK_THROWS_AS(projection(-10, 0.5), Error);
}

TEST_CASE("decimal terabytes") {
  CHECK(bytes_per_tb(TbMode::Binary) == 1099511627776.0);
  CHECK(bytes_per_tb(TbMode::Decimal) == 1e12);
  const auto bin = savings_report(2'000'000'000'000, 0, Architecture::Distributed);
  const auto dec = savings_report(2'000'000'000'000, 0, Architecture::Distributed, 500, {TbMode::Decimal, false});
  CHECK(dec.savings_kwh == doctest::Approx(2 * 2.55 * 8.76).epsilon(1e-12));
  CHECK(dec.savings_kwh / bin.savings_kwh == doctest::Approx(1.099511627776).epsilon(1e-12));
}

TEST_CASE("projection") {
  const auto p = projection(10, 0.70);
  CHECK(p.kwh_distributed == doctest::Approx(156.366).epsilon(1e-9));
  CHECK(p.kwh_centralized == doctest::Approx(708.246).epsilon(1e-9));
  CHECK(p.carbon_kg_distributed == doctest::Approx(78.183).epsilon(1e-9));
  CHECK(p.carbon_kg_centralized == doctest::Approx(354.123).epsilon(1e-9));
  const auto zero = projection(10, 0.0);
  CHECK(zero.kwh_distributed == 0.0);
  CHECK(zero.kwh_centralized == 0.0);
  CHECK(zero.carbon_kg_distributed == 0.0);
  CHECK(zero.carbon_kg_centralized == 0.0);
  const nlohmann::json j = p;
  CHECK(j.contains("kwh_distributed"));
}
