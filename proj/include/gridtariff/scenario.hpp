#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridtariff/classification.hpp"
#include "gridtariff/error.hpp"
#include "gridtariff/tariff_solver.hpp"

namespace gridtariff {

struct ScenarioSpec {
  std::string name;
  DesignSpec design;
  SolverConfig solver;
  double gt_flat = 18.25;
};

// "Flat", "TOU", "IPP;2kWh", "DCPP;5%", "DCIPP;(2kWh,20%)".
std::string scenario_name(const DesignSpec& design);

struct ScenarioDiagnostics {
  double q_peak = 0.0;
  double q_base = 0.0;
  Eigen::Index peak_hour_count = 0;
  double r_so = 0.0;
};

struct ScenarioResult {
  ScenarioSpec spec;
  TariffRates rates;
  std::vector<RedistributionRow> rows;
  ScenarioDiagnostics diagnostics;
};

struct ScenarioFailure {
  ErrorCode code;
  std::string message;
};

// Outcome of one scenario inside a sweep: exactly one of result / failure.
struct ScenarioOutcome {
  ScenarioSpec spec;
  std::optional<ScenarioResult> result;
  std::optional<ScenarioFailure> failure;

  bool ok() const { return result.has_value(); }
};

// classify_all -> revenue_target -> solve_peak_tariff -> redistribution.
// Flat is solved with f_recov = 1. Throws on failure.
ScenarioResult run_scenario(const Dataset& d, const ScenarioSpec& s);

// Results come back in input order for any `parallelism`; failures are
// recorded inline. Throws InvalidConfig for duplicate names.
std::vector<ScenarioOutcome> sweep(const Dataset& d, const std::vector<ScenarioSpec>& specs,
                                   unsigned parallelism);

struct GroupRatio {
  std::string group;  // e.g. "Ap_A1"
  double ratio = 1.0; // household-weighted mean of bill_design / bill_flat
};

struct SensitivityRow {
  double f_recov = 1.0;
  TariffRates rates;
  AggregateSplit split;
  std::vector<GroupRatio> groups;  // dwelling type x area band
};

// Re-solves one scenario for every f over a single classification.
std::vector<SensitivityRow> f_sensitivity(const Dataset& d, const ScenarioSpec& s,
                                          const std::vector<double>& f_values);

// Sweep specification file:
//   { "gt_flat": 18.25, "gt_base": 18.25 (optional, defaults to gt_flat),
//     "f_recov": 0.95 | [0.95, 0.9],
//     "scenarios": [ {"name"?: "...", "kind": "ipp", "threshold_kwh"?: 2,
//                     "trigger_fraction"?: 0.05,
//                     "tou_window"?: {"start_hour": 17, "end_hour": 20, "months": [10,11,12,1,2,3]}} ] }
// With a list of f values every scenario is expanded once per f and
// ";f=<value>" is appended to its name.
std::vector<ScenarioSpec> parse_sweep_spec(const nlohmann::json& j);
std::vector<ScenarioSpec> load_sweep_spec(const std::filesystem::path& path);

// The grid used throughout the tests: Flat, TOU, IPP x {1, 1.5, 2, 3} kWh,
// DCPP x {1, 5, 20, 40}%, DCIPP x the same thresholds and triggers.
std::vector<ScenarioSpec> standard_grid(const SolverConfig& solver, double gt_flat);

// The twelve representative scenarios (IPP, DCPP, and DCIPP at 2 kWh).
std::vector<ScenarioSpec> presented_scenarios(const SolverConfig& solver, double gt_flat);

}  // namespace gridtariff
