#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridtariff/dataset.hpp"

namespace gridtariff {

// Parameters of the synthetic category-profile generator.
//
// A category's annual per-household energy is
//   base_annual_kwh * occupancy_factor * area_factor * income_factor
//   (+ hp_annual_kwh if HP) (+ ev_annual_kwh if EV).
struct GeneratorConfig {
  int year = 2017;
  std::uint64_t seed = 2017;

  // Household count per category; when unset the built-in table skewed
  // toward small apartments is used. `households` overrides per label.
  std::optional<std::uint64_t> default_households;
  std::map<std::string, std::uint64_t> households;

  double base_annual_kwh = 1500.0;
  std::array<double, 4> occupancy_factors = {1.0, 1.55, 2.1, 2.8};  // P1, P2, P3, P5+
  std::array<double, 3> area_factors = {1.0, 1.2, 1.45};            // A1, A2, A3
  std::array<double, 3> income_factors = {1.0, 1.08, 1.18};         // E1, E2, E3

  double hp_annual_kwh = 3500.0;
  double ev_annual_kwh = 2500.0;
  double ev_charge_kw = 3.7;
  double night_charging_share = 0.9;

  double noise_amplitude = 0.15;
  double industrial_baseline_mw = 2500.0;

  // Category labels to emit; empty means the default observed set.
  std::vector<std::string> categories;
};

// Throws InvalidConfig.
void validate(const GeneratorConfig& cfg);

void to_json(nlohmann::json& j, const GeneratorConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, GeneratorConfig& cfg);

// The 90 category labels observed in the Danish reference data.
const std::vector<std::string>& observed_category_labels();

std::uint64_t default_household_count(const CategoryKey& key);

double expected_annual_kwh(const GeneratorConfig& cfg, const CategoryKey& key);

// Deterministic in cfg: each category draws from a stream derived only from
// (seed, category key), so generation order does not matter.
Dataset generate_dataset(const GeneratorConfig& cfg);

// hourly_load[t] = baseline + sum_g N_g * hourly_kwh_g[t] / 1000.
SystemLoad derive_system_load(const Dataset& d, double industrial_baseline_mw);
SystemLoad derive_system_load(const std::vector<CategoryRecord>& categories, double industrial_baseline_mw);

// Writes categories.csv, profiles.csv, system_load.csv and provenance.json.
void write_generated(const Dataset& d, const GeneratorConfig& cfg, const std::filesystem::path& dir);

}  // namespace gridtariff
