#include "gridtariff/scenario.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "gridtariff/csv.hpp"
#include "gridtariff/reporting.hpp"

namespace gridtariff {
namespace {

std::string compact_number(double v) {
  return csv::format_double(std::round(v * 1e9) / 1e9);
}

[[noreturn]] void bad_spec(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "sweep spec: " + what);
}

ScenarioResult solve_classified(const ScenarioSpec& s, const Classifications& classes,
                                const HouseholdCounts& counts, const RevenueTarget& target,
                                Eigen::Index peak_hour_count) {
  SolverConfig solver = s.solver;
  if (s.design.kind == DesignKind::Flat) solver.f_recov = 1.0;

  ScenarioResult result;
  result.spec = s;
  result.rates = solve_peak_tariff(classes, counts, solver, target);
  result.rows = redistribution(classes, counts, result.rates, s.gt_flat);
  const auto split = aggregate_split(classes, counts);
  result.diagnostics = {split.q_peak, split.q_base, peak_hour_count, target.r_so};
  return result;
}

DesignSpec design_from_json(const nlohmann::json& sc) {
  const auto kind_name = sc.at("kind").get<std::string>();
  auto kind = parse_design_kind(kind_name);
  if (!kind) throw Error(ErrorCode::InvalidDesign, "sweep spec: unknown design kind '" + kind_name + "'");
  DesignSpec design;
  design.kind = *kind;
  if (sc.contains("threshold_kwh")) design.threshold_kwh = sc.at("threshold_kwh").get<double>();
  if (sc.contains("trigger_fraction")) design.trigger_fraction = sc.at("trigger_fraction").get<double>();
  if (design.kind == DesignKind::TOU) {
    TouWindow window;
    if (sc.contains("tou_window")) {
      const auto& w = sc.at("tou_window");
      window.start_hour = w.value("start_hour", window.start_hour);
      window.end_hour_exclusive = w.value("end_hour", window.end_hour_exclusive);
      if (w.contains("months")) window.months = w.at("months").get<std::set<unsigned>>();
    }
    design.tou_window = window;
  } else if (sc.contains("tou_window")) {
    bad_spec("tou_window given for a non-TOU scenario");
  }
  validate(design);
  return design;
}

}  // namespace

std::string scenario_name(const DesignSpec& design) {
  switch (design.kind) {
    case DesignKind::Flat: return "Flat";
    case DesignKind::TOU: return "TOU";
    case DesignKind::IPP: return "IPP;" + compact_number(*design.threshold_kwh) + "kWh";
    case DesignKind::DCPP: return "DCPP;" + compact_number(*design.trigger_fraction * 100.0) + "%";
    case DesignKind::DCIPP:
      return "DCIPP;(" + compact_number(*design.threshold_kwh) + "kWh," +
             compact_number(*design.trigger_fraction * 100.0) + "%)";
  }
  return "?";
}

ScenarioResult run_scenario(const Dataset& d, const ScenarioSpec& s) {
  validate(s.design);
  validate(s.solver);
  const auto peak_hours = peak_hours_for(d, s.design);
  const PeakHourSet* hours = peak_hours ? &*peak_hours : nullptr;
  Classifications classes;
  for (const auto& rec : d.categories()) classes.emplace(rec.key, classify_category(rec, s.design, hours));
  const auto target = revenue_target(d, s.gt_flat);
  return solve_classified(s, classes, household_counts(d), target,
                          peak_hours ? static_cast<Eigen::Index>(peak_hours->hours.size()) : 0);
}

std::vector<ScenarioOutcome> sweep(const Dataset& d, const std::vector<ScenarioSpec>& specs,
                                   unsigned parallelism) {
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (!names.insert(s.name).second) {
      throw Error(ErrorCode::InvalidConfig, "duplicate scenario name '" + s.name + "'");
    }
  }

  std::vector<ScenarioOutcome> outcomes(specs.size());
  auto run_one = [&](std::size_t i) {
    auto& out = outcomes[i];
    out.spec = specs[i];
    try {
      out.result = run_scenario(d, specs[i]);
    } catch (const Error& e) {
      out.failure = ScenarioFailure{e.code(), e.what()};
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(specs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) run_one(i);
    return outcomes;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) run_one(i);
      });
    }
  }
  return outcomes;
}

std::vector<SensitivityRow> f_sensitivity(const Dataset& d, const ScenarioSpec& s,
                                          const std::vector<double>& f_values) {
  std::set<double> distinct(f_values.begin(), f_values.end());
  if (distinct.size() != f_values.size()) throw Error(ErrorCode::InvalidConfig, "f values must be distinct");

  const auto classes = classify_all(d, s.design);
  const auto counts = household_counts(d);
  const auto target = revenue_target(d, s.gt_flat);
  const GroupingSpec by_dwelling_area{{GroupDim::DwellingType, GroupDim::AreaBand}, Weighting::HouseholdCount};

  std::vector<SensitivityRow> table;
  for (double f : f_values) {
    SolverConfig solver = s.solver;
    solver.f_recov = f;
    SensitivityRow row;
    row.f_recov = f;
    row.rates = solve_peak_tariff(classes, counts, solver, target);
    row.split = aggregate_split(classes, counts);
    for (const auto& g : group_average(redistribution(classes, counts, row.rates, s.gt_flat), counts,
                                       by_dwelling_area)) {
      row.groups.push_back({g.group_label, 1.0 + g.mean_relative_change});
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<ScenarioSpec> parse_sweep_spec(const nlohmann::json& j) {
  try {
    if (!j.is_object()) bad_spec("top level must be an object");
    const double gt_flat = j.value("gt_flat", 18.25);
    const double gt_base = j.value("gt_base", gt_flat);
    std::vector<double> f_values;
    if (!j.contains("f_recov")) {
      f_values = {0.95};
    } else if (j.at("f_recov").is_array()) {
      f_values = j.at("f_recov").get<std::vector<double>>();
      if (f_values.empty()) bad_spec("f_recov list is empty");
    } else {
      f_values = {j.at("f_recov").get<double>()};
    }
    if (!j.contains("scenarios") || !j.at("scenarios").is_array()) bad_spec("missing 'scenarios' array");

    std::vector<ScenarioSpec> specs;
    for (const auto& sc : j.at("scenarios")) {
      const DesignSpec design = design_from_json(sc);
      const std::string base_name = sc.contains("name") ? sc.at("name").get<std::string>() : scenario_name(design);
      for (double f : f_values) {
        ScenarioSpec s;
        s.name = f_values.size() > 1 ? base_name + ";f=" + compact_number(f) : base_name;
        s.design = design;
        s.solver = {gt_base, f};
        s.gt_flat = gt_flat;
        validate(s.solver);
        specs.push_back(std::move(s));
      }
    }
    std::set<std::string> names;
    for (const auto& s : specs) {
      if (!names.insert(s.name).second) bad_spec("duplicate scenario name '" + s.name + "'");
    }
    return specs;
  } catch (const nlohmann::json::exception& e) {
    bad_spec(e.what());
  }
}

std::vector<ScenarioSpec> load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    bad_spec(e.what());
  }
  return parse_sweep_spec(j);
}

namespace {

ScenarioSpec make(const DesignSpec& design, const SolverConfig& solver, double gt_flat) {
  return {scenario_name(design), design, solver, gt_flat};
}

}  // namespace

std::vector<ScenarioSpec> presented_scenarios(const SolverConfig& solver, double gt_flat) {
  std::vector<ScenarioSpec> out;
  for (double th : {1.0, 1.5, 2.0, 3.0}) out.push_back(make(DesignSpec::ipp(th), solver, gt_flat));
  for (double p : {0.01, 0.05, 0.20, 0.40}) out.push_back(make(DesignSpec::dcpp(p), solver, gt_flat));
  for (double p : {0.01, 0.05, 0.20, 0.40}) out.push_back(make(DesignSpec::dcipp(2.0, p), solver, gt_flat));
  return out;
}

std::vector<ScenarioSpec> standard_grid(const SolverConfig& solver, double gt_flat) {
  std::vector<ScenarioSpec> out;
  out.push_back(make(DesignSpec::flat(), solver, gt_flat));
  out.push_back(make(DesignSpec::tou(), solver, gt_flat));
  for (double th : {1.0, 1.5, 2.0, 3.0}) out.push_back(make(DesignSpec::ipp(th), solver, gt_flat));
  for (double p : {0.01, 0.05, 0.20, 0.40}) out.push_back(make(DesignSpec::dcpp(p), solver, gt_flat));
  for (double th : {1.0, 1.5, 2.0, 3.0}) {
    for (double p : {0.01, 0.05, 0.20, 0.40}) out.push_back(make(DesignSpec::dcipp(th, p), solver, gt_flat));
  }
  return out;
}

}  // namespace gridtariff
