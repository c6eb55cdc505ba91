#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridtariff/classification.hpp"
#include "gridtariff/tariff_solver.hpp"

namespace gridtariff {

struct ScenarioOutcome;

enum class GroupDim { DwellingType, AreaBand, IncomeBand, Occupancy, Ev, Hp };
enum class Weighting { HouseholdCount, Unweighted };

std::string_view group_dim_name(GroupDim dim);
std::optional<GroupDim> parse_group_dim(std::string_view s);

struct GroupingSpec {
  std::vector<GroupDim> dims;
  Weighting weighting = Weighting::HouseholdCount;
};

// Parses "dwelling_type,area_band"; throws InvalidConfig.
GroupingSpec parse_grouping(std::string_view dims, Weighting weighting = Weighting::HouseholdCount);
void validate(const GroupingSpec& g);
std::string grouping_tag(const GroupingSpec& g);  // "dwelling_type-area_band"

// Label tokens of the grouped dimensions joined by '_', e.g. "Ap_A1", "EV1_HP0".
std::string group_label(const CategoryKey& key, const GroupingSpec& g);

struct GroupAverageRow {
  std::string group_label;
  double mean_relative_change = 0.0;
  double mean_delta_ore_year = 0.0;
  std::uint64_t n_households_total = 0;
};

// Groups appear in taxonomy order of their dimension values.
std::vector<GroupAverageRow> group_average(const std::vector<RedistributionRow>& rows,
                                           const HouseholdCounts& counts, const GroupingSpec& g);

// Groupings emitted by default: dwelling type x area, EV x HP, income x occupancy.
std::vector<GroupingSpec> default_groupings(Weighting weighting = Weighting::HouseholdCount);

struct ReportContext {
  std::uint64_t dataset_hash = 0;
  nlohmann::json config;  // echoed into the manifest
  HouseholdCounts counts;
  LoadDurationCurve ldc;
};

// Writes rates.csv, redistribution_delta.csv, redistribution_relative.csv,
// households.csv, group_averages_<dims>.csv per grouping, ldc.csv and
// manifest.json. Failed scenarios appear only in the manifest. Throws IoFailure.
void emit_reports(const std::vector<ScenarioOutcome>& outcomes, const std::vector<GroupingSpec>& groupings,
                  const ReportContext& ctx, const std::filesystem::path& out_dir);

// Long-format group averages across scenarios:
//   scenario,group,mean_relative_change,mean_delta_ore_year,n_households_total
std::string group_averages_csv(const std::vector<std::string>& scenario_names,
                               const std::vector<std::vector<RedistributionRow>>& rows_per_scenario,
                               const HouseholdCounts& counts, const GroupingSpec& g);

// Reads redistribution_delta.csv, redistribution_relative.csv and
// households.csv from a results directory and writes group_averages.csv.
void report_from_results(const std::filesystem::path& results_dir, const GroupingSpec& g);

std::string ldc_csv(const LoadDurationCurve& ldc);

}  // namespace gridtariff
