#pragma once

#include <string>
#include <vector>

#include "gridtariff/scenario.hpp"

namespace gridtariff::oracle {

// Naive reference evaluation of one scenario. Shares no code with the
// engine's classification or solver: trigger hours are picked by repeated
// linear maximum search, the calendar is computed from a month-length table,
// and the peak rate is found by bisection on the revenue equation.
struct OracleCategory {
  std::string label;
  double bill_flat = 0.0;
  double bill_design = 0.0;
  double delta = 0.0;
};

struct OracleResult {
  bool feasible = true;
  double base_rate = 0.0;
  double peak_rate = 0.0;
  std::vector<OracleCategory> categories;  // label order
};

struct NaiveCategory {
  std::string label;
  double households = 1.0;
  std::vector<double> kwh;
};

struct NaiveInstance {
  int year = 2017;
  std::vector<NaiveCategory> categories;
  std::vector<double> system_load;
};

NaiveInstance from_dataset(const Dataset& d);

OracleResult evaluate(const NaiveInstance& inst, const ScenarioSpec& s);

struct Comparison {
  bool match = true;
  std::string detail;
};

// Rates and bills compared at `rel_tol` relative; deltas relative to the
// category's flat bill. Infeasible in both counts as a match.
Comparison compare(const Dataset& d, const ScenarioSpec& s, double rel_tol = 1e-9);

// Scenario grid used by `oracle-check`: thresholds at the distinct hourly
// values of the data, triggers over several fractions, TOU when the data
// covers a full year, each at several recovery factors.
std::vector<ScenarioSpec> check_grid(const Dataset& d, double gt_base);

}  // namespace gridtariff::oracle
