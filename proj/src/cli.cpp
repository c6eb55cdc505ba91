#include "gridtariff/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridtariff/oracle.hpp"
#include "gridtariff/reporting.hpp"
#include "gridtariff/scenario.hpp"
#include "gridtariff/synthgen.hpp"
#include "gridtariff/version.hpp"

namespace gridtariff::cli {
namespace {

struct UsageError {
  std::string message;
};

void emit_error(std::ostream& err, std::string_view code, int exit_code, const std::string& message) {
  nlohmann::json j;
  j["error"] = code;
  j["exit_code"] = exit_code;
  j["message"] = message;
  err << j.dump() << "\n";
}

int dataset_year(const std::filesystem::path& dir, std::optional<int> override_year) {
  if (override_year) return *override_year;
  const auto provenance = dir / "provenance.json";
  if (!std::filesystem::exists(provenance)) return 2017;
  std::ifstream in(provenance);
  try {
    nlohmann::json j;
    in >> j;
    return j.value("year", 2017);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, "provenance.json: " + std::string(e.what()));
  }
}

Dataset load_data_dir(const std::string& dir, std::optional<int> year) {
  return load_dataset(DatasetPaths::in_directory(dir), dataset_year(dir, year));
}

ReportContext context_for(const Dataset& d, nlohmann::json config) {
  ReportContext ctx;
  ctx.dataset_hash = dataset_hash(d);
  ctx.config = std::move(config);
  ctx.counts = household_counts(d);
  ctx.ldc = load_duration_curve(d.system_load());
  return ctx;
}

struct GenerateArgs {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string config;
};

struct RunArgs {
  std::string data;
  std::string design;
  std::optional<double> threshold;
  std::optional<double> trigger;
  double frecov = 0.95;
  double gt_base = 18.25;
  std::optional<double> gt_flat;
  std::string out;
  std::optional<int> year;
  bool unweighted = false;
};

struct SweepArgs {
  std::string data;
  std::string spec;
  std::string out;
  unsigned jobs = 0;
  std::optional<int> year;
  bool unweighted = false;
};

struct ReportArgs {
  std::string results;
  std::string group_by;
  bool unweighted = false;
};

struct OracleArgs {
  std::string data;
  std::optional<int> year;
  double gt_base = 18.25;
};

constexpr Eigen::Index kOracleMaxHours = 744;
constexpr std::size_t kOracleMaxCategories = 16;

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + a.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, a.config + ": " + e.what());
    }
    from_json(j, cfg);
  }
  if (a.seed_given) cfg.seed = a.seed;
  const Dataset d = generate_dataset(cfg);
  write_generated(d, cfg, a.out);
  out << "wrote " << d.categories().size() << " categories x " << d.hours() << " hours to " << a.out << "\n";
  return kOk;
}

DesignSpec design_from_flags(const RunArgs& a) {
  auto kind = parse_design_kind(a.design);
  if (!kind) throw UsageError{"--design must be one of flat, tou, ipp, dcpp, dcipp"};
  const bool wants_threshold = *kind == DesignKind::IPP || *kind == DesignKind::DCIPP;
  const bool wants_trigger = *kind == DesignKind::DCPP || *kind == DesignKind::DCIPP;
  if (wants_threshold && !a.threshold) throw UsageError{"--design " + a.design + " requires --threshold"};
  if (wants_trigger && !a.trigger) throw UsageError{"--design " + a.design + " requires --trigger"};
  if (!wants_threshold && a.threshold) throw UsageError{"--threshold does not apply to --design " + a.design};
  if (!wants_trigger && a.trigger) throw UsageError{"--trigger does not apply to --design " + a.design};
  if (a.threshold && !(*a.threshold > 0.0)) throw UsageError{"--threshold must be > 0"};
  if (a.trigger && !(*a.trigger > 0.0 && *a.trigger <= 1.0)) {
    throw UsageError{"--trigger is a fraction in (0, 1], e.g. 0.05 for 5%"};
  }
  switch (*kind) {
    case DesignKind::Flat: return DesignSpec::flat();
    case DesignKind::TOU: return DesignSpec::tou();
    case DesignKind::IPP: return DesignSpec::ipp(*a.threshold);
    case DesignKind::DCPP: return DesignSpec::dcpp(*a.trigger);
    case DesignKind::DCIPP: return DesignSpec::dcipp(*a.threshold, *a.trigger);
  }
  return DesignSpec::flat();
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const DesignSpec design = design_from_flags(a);
  if (!(a.frecov > 0.0 && a.frecov <= 1.0)) throw UsageError{"--frecov must lie in (0, 1]"};
  if (!(a.gt_base > 0.0)) throw UsageError{"--gt-base must be > 0"};
  if (a.gt_flat && !(*a.gt_flat > 0.0)) throw UsageError{"--gt-flat must be > 0"};

  const Dataset d = load_data_dir(a.data, a.year);
  ScenarioSpec spec{scenario_name(design), design, {a.gt_base, a.frecov}, a.gt_flat.value_or(a.gt_base)};
  ScenarioOutcome outcome;
  outcome.spec = spec;
  outcome.result = run_scenario(d, spec);

  nlohmann::json config = {{"command", "run"},
                           {"data", a.data},
                           {"scenario", spec.name},
                           {"gt_base", a.gt_base},
                           {"gt_flat", spec.gt_flat},
                           {"f_recov", a.frecov}};
  const auto weighting = a.unweighted ? Weighting::Unweighted : Weighting::HouseholdCount;
  emit_reports({outcome}, default_groupings(weighting), context_for(d, config), a.out);
  const auto& rates = outcome.result->rates;
  out << spec.name << ": base " << rates.base_rate << " Øre/kWh, peak " << rates.peak_rate << " Øre/kWh\n";
  return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto specs = load_sweep_spec(a.spec);
  const Dataset d = load_data_dir(a.data, a.year);
  const unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto outcomes = sweep(d, specs, jobs);

  nlohmann::json spec_json;
  {
    std::ifstream in(a.spec);
    in >> spec_json;
  }
  nlohmann::json config = {{"command", "sweep"}, {"data", a.data}, {"spec", spec_json}};
  const auto weighting = a.unweighted ? Weighting::Unweighted : Weighting::HouseholdCount;
  emit_reports(outcomes, default_groupings(weighting), context_for(d, config), a.out);

  std::size_t failed = 0;
  for (const auto& o : outcomes) failed += o.ok() ? 0 : 1;
  out << outcomes.size() - failed << " scenarios solved, " << failed << " failed; reports in " << a.out << "\n";
  return kOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  GroupingSpec g;
  try {
    g = parse_grouping(a.group_by, a.unweighted ? Weighting::Unweighted : Weighting::HouseholdCount);
  } catch (const Error& e) {
    throw UsageError{std::string("--group-by: ") + e.what()};
  }
  report_from_results(a.results, g);
  out << "wrote " << (std::filesystem::path(a.results) / "group_averages.csv").string() << "\n";
  return kOk;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset d = load_data_dir(a.data, a.year);
  if (d.hours() > kOracleMaxHours || d.categories().size() > kOracleMaxCategories) {
    throw UsageError{"oracle-check is limited to " + std::to_string(kOracleMaxHours) + " hours and " +
                     std::to_string(kOracleMaxCategories) + " categories"};
  }
  const auto grid = oracle::check_grid(d, a.gt_base);
  std::size_t mismatches = 0;
  for (const auto& s : grid) {
    const auto cmp = oracle::compare(d, s);
    if (!cmp.match) {
      ++mismatches;
      err << cmp.detail << "\n";
    }
  }
  out << "oracle-check: " << grid.size() - mismatches << "/" << grid.size() << " scenarios match\n";
  return mismatches == 0 ? kOk : kData;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InfeasiblePeakRecovery: return kInfeasible;
    case ErrorCode::IoFailure: return kIo;
    case ErrorCode::InvalidDesign:
    case ErrorCode::MissingThreshold:
    case ErrorCode::MissingPeakHours: return kUsage;
    default: return kData;
  }
}

std::string version_string() {
  return std::string("gridtariff ") + kEngineVersion + " (model revision " + std::to_string(kModelRevision) + ")";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Revenue-neutral grid tariff simulation over household category load profiles", "gridtariff"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic category dataset");
  generate->add_option("--seed", gen.seed, "Random seed")->each([&](const std::string&) { gen.seed_given = true; });
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--config", gen.config, "Generator config JSON");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Solve one tariff design and write its reports");
  run_cmd->add_option("--data", run.data, "Dataset directory")->required();
  run_cmd->add_option("--design", run.design, "flat | tou | ipp | dcpp | dcipp")->required();
  run_cmd->add_option("--threshold", run.threshold, "Hourly threshold in kWh (ipp, dcipp)");
  run_cmd->add_option("--trigger", run.trigger,
                      "Trigger as a fraction of the year's hours: 0.05 means 5% (dcpp, dcipp)");
  run_cmd->add_option("--frecov", run.frecov, "Recovery factor on the base rate")->capture_default_str();
  run_cmd->add_option("--gt-base", run.gt_base, "Base tariff in Øre/kWh")->capture_default_str();
  run_cmd->add_option("--gt-flat", run.gt_flat, "Flat reference tariff in Øre/kWh (defaults to --gt-base)");
  run_cmd->add_option("--year", run.year, "Dataset year (defaults to provenance.json or 2017)");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_flag("--unweighted", run.unweighted, "Unweighted group averages");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario grid from a JSON spec");
  sweep_cmd->add_option("--data", sw.data, "Dataset directory")->required();
  sweep_cmd->add_option("--spec", sw.spec, "Sweep spec JSON")->required();
  sweep_cmd->add_option("--out", sw.out, "Output directory")->required();
  sweep_cmd->add_option("--jobs", sw.jobs, "Parallel scenarios (default: available cores)");
  sweep_cmd->add_option("--year", sw.year, "Dataset year (defaults to provenance.json or 2017)");
  sweep_cmd->add_flag("--unweighted", sw.unweighted, "Unweighted group averages");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Group averages from an existing results directory");
  report->add_option("--results", rep.results, "Results directory")->required();
  report->add_option("--group-by", rep.group_by,
                     "Comma-separated dims: dwelling_type, area_band, income_band, occupancy, ev, hp")
      ->required();
  report->add_flag("--unweighted", rep.unweighted, "Unweighted averages");

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the engine against a brute-force oracle");
  oracle_cmd->add_option("--data", orc.data, "Dataset directory (small instances only)")->required();
  oracle_cmd->add_option("--year", orc.year, "Dataset year (defaults to provenance.json or 2017)");
  oracle_cmd->add_option("--gt-base", orc.gt_base, "Base tariff in Øre/kWh")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << version_string() << "\n";
    return kOk;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    emit_error(err, "UsageError", kUsage, e.what());
    return kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out);
    if (report->parsed()) return cmd_report(rep, out);
    if (oracle_cmd->parsed()) return cmd_oracle(orc, out, err);
  } catch (const UsageError& e) {
    emit_error(err, "UsageError", kUsage, e.message);
    return kUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    emit_error(err, error_code_name(e.code()), code, e.what());
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    emit_error(err, "IoFailure", kIo, e.what());
    return kIo;
  }
  emit_error(err, "UsageError", kUsage, "no command given");
  return kUsage;
}

}  // namespace gridtariff::cli
