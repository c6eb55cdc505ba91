#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gridtariff/classification.hpp"
#include "gridtariff/dataset.hpp"

namespace gridtariff {

// Money is carried in Øre, energy in kWh.

struct RevenueTarget {
  double r_so = 0.0;  // Øre per year across all households
};

struct SolverConfig {
  double gt_base = 18.25;  // Øre/kWh
  double f_recov = 0.95;   // share of the base rate charged on base consumption
};

void validate(const SolverConfig& cfg);

struct TariffRates {
  double base_rate = 0.0;  // gt_base * f_recov
  double peak_rate = 0.0;
};

struct AggregateSplit {
  double q_peak = 0.0;  // household-weighted kWh
  double q_base = 0.0;
};

struct RedistributionRow {
  CategoryKey key;
  double bill_flat = 0.0;    // Øre/year per household
  double bill_design = 0.0;  // Øre/year per household
  double delta = 0.0;
  double relative_change = 0.0;  // bill_design / bill_flat - 1
  bool zero_flat_bill = false;   // relative_change forced to 0
};

using Classifications = std::map<CategoryKey, Classification>;
using HouseholdCounts = std::map<CategoryKey, std::uint64_t>;

// Throws InvalidConfig for a non-positive rate, ZeroConsumption.
RevenueTarget revenue_target(const Dataset& d, double gt_flat);

// Sums over categories in key order so results are bit-stable.
AggregateSplit aggregate_split(const Classifications& classes, const HouseholdCounts& counts);

// Closed-form revenue-neutral solve:
//   r_so = Q_peak * peak_rate + Q_base * gt_base * f_recov.
// Throws InfeasiblePeakRecovery when no peak consumption is left to recover
// the withheld share, ZeroConsumption when Q_peak + Q_base == 0.
TariffRates solve_peak_tariff(const Classifications& classes, const HouseholdCounts& counts,
                              const SolverConfig& cfg, const RevenueTarget& target);

double annual_bill(const Classification& c, const TariffRates& rates);

// One row per category in canonical label order.
std::vector<RedistributionRow> redistribution(const Classifications& classes, const HouseholdCounts& counts,
                                              const TariffRates& rates, double gt_flat);

}  // namespace gridtariff
