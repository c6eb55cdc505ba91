#include "gridtariff/reporting.hpp"

#include <map>
#include <set>

#include "gridtariff/csv.hpp"
#include "gridtariff/error.hpp"
#include "gridtariff/scenario.hpp"
#include "gridtariff/version.hpp"

namespace gridtariff {
namespace {

int dim_value(const CategoryKey& k, GroupDim dim) {
  switch (dim) {
    case GroupDim::DwellingType: return static_cast<int>(k.dwelling_type);
    case GroupDim::AreaBand: return static_cast<int>(k.area_band);
    case GroupDim::IncomeBand: return static_cast<int>(k.income_band);
    case GroupDim::Occupancy: return static_cast<int>(k.occupancy);
    case GroupDim::Ev: return k.ev ? 1 : 0;
    case GroupDim::Hp: return k.hp ? 1 : 0;
  }
  return 0;
}

std::string dim_token(const CategoryKey& k, GroupDim dim) {
  switch (dim) {
    case GroupDim::DwellingType: return std::string(label_token(k.dwelling_type));
    case GroupDim::AreaBand: return std::string(label_token(k.area_band));
    case GroupDim::IncomeBand: return std::string(label_token(k.income_band));
    case GroupDim::Occupancy: return std::string(label_token(k.occupancy));
    case GroupDim::Ev: return k.ev ? "EV1" : "EV0";
    case GroupDim::Hp: return k.hp ? "HP1" : "HP0";
  }
  return {};
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string weighting_name(Weighting w) {
  return w == Weighting::HouseholdCount ? "household_count" : "unweighted";
}

std::string redistribution_csv(const std::vector<const ScenarioResult*>& ok, const HouseholdCounts& counts,
                               bool relative) {
  std::string out = "category_id";
  for (const auto* r : ok) out += "," + csv::quote(r->spec.name);
  out += '\n';
  std::size_t i = 0;
  for (const auto& [key, _] : counts) {
    out += key.label();
    for (const auto* r : ok) {
      const auto& row = r->rows.at(i);
      if (row.key != key) throw Error(ErrorCode::SchemaViolation, "scenario rows out of category order");
      out += ',';
      out += csv::format_double(relative ? row.relative_change : row.delta);
    }
    out += '\n';
    ++i;
  }
  return out;
}

std::map<std::string, std::vector<std::string>> read_columns(const std::filesystem::path& path,
                                                             std::vector<std::string>& header,
                                                             std::vector<std::string>& ids) {
  auto table = csv::read_table(path);
  header = table.header;
  if (header.empty() || header.front() != "category_id") {
    throw Error(ErrorCode::SchemaViolation, path.filename().string() + ": first column must be category_id");
  }
  std::map<std::string, std::vector<std::string>> cols;
  ids.clear();
  for (const auto& row : table.rows) {
    ids.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) cols[header[c]].push_back(row[c]);
  }
  return cols;
}

double parse_cell(const std::string& s, const std::filesystem::path& file) {
  auto v = csv::parse_double(s);
  if (!v) throw Error(ErrorCode::SchemaViolation, file.filename().string() + ": non-numeric cell '" + s + "'");
  return *v;
}

}  // namespace

std::string_view group_dim_name(GroupDim dim) {
  switch (dim) {
    case GroupDim::DwellingType: return "dwelling_type";
    case GroupDim::AreaBand: return "area_band";
    case GroupDim::IncomeBand: return "income_band";
    case GroupDim::Occupancy: return "occupancy";
    case GroupDim::Ev: return "ev";
    case GroupDim::Hp: return "hp";
  }
  return "?";
}

std::optional<GroupDim> parse_group_dim(std::string_view s) {
  for (auto d : {GroupDim::DwellingType, GroupDim::AreaBand, GroupDim::IncomeBand, GroupDim::Occupancy,
                 GroupDim::Ev, GroupDim::Hp}) {
    if (group_dim_name(d) == s) return d;
  }
  return std::nullopt;
}

GroupingSpec parse_grouping(std::string_view dims, Weighting weighting) {
  GroupingSpec g;
  g.weighting = weighting;
  for (auto part : csv::split_row(dims)) {
    auto d = parse_group_dim(part);
    if (!d) throw Error(ErrorCode::InvalidConfig, "unknown grouping dimension '" + std::string(part) + "'");
    g.dims.push_back(*d);
  }
  validate(g);
  return g;
}

void validate(const GroupingSpec& g) {
  if (g.dims.empty()) throw Error(ErrorCode::InvalidConfig, "grouping needs at least one dimension");
  std::set<GroupDim> seen(g.dims.begin(), g.dims.end());
  if (seen.size() != g.dims.size()) throw Error(ErrorCode::InvalidConfig, "grouping repeats a dimension");
}

std::string grouping_tag(const GroupingSpec& g) {
  std::string tag;
  for (auto d : g.dims) {
    if (!tag.empty()) tag += '-';
    tag += group_dim_name(d);
  }
  return tag;
}

std::string group_label(const CategoryKey& key, const GroupingSpec& g) {
  std::string label;
  for (auto d : g.dims) {
    if (!label.empty()) label += '_';
    label += dim_token(key, d);
  }
  return label;
}

std::vector<GroupAverageRow> group_average(const std::vector<RedistributionRow>& rows,
                                           const HouseholdCounts& counts, const GroupingSpec& g) {
  validate(g);
  struct Acc {
    std::string label;
    double weight = 0.0;
    double rel = 0.0;
    double delta = 0.0;
    std::uint64_t households = 0;
  };
  std::map<std::vector<int>, Acc> groups;
  for (const auto& row : rows) {
    auto it = counts.find(row.key);
    if (it == counts.end()) throw Error(ErrorCode::SchemaViolation, "no household count for " + row.key.label());
    std::vector<int> id;
    for (auto d : g.dims) id.push_back(dim_value(row.key, d));
    auto& acc = groups[id];
    if (acc.label.empty()) acc.label = group_label(row.key, g);
    const double w = g.weighting == Weighting::HouseholdCount ? static_cast<double>(it->second) : 1.0;
    acc.weight += w;
    acc.rel += w * row.relative_change;
    acc.delta += w * row.delta;
    acc.households += it->second;
  }
  std::vector<GroupAverageRow> out;
  out.reserve(groups.size());
  for (const auto& [_, acc] : groups) {
    out.push_back({acc.label, acc.rel / acc.weight, acc.delta / acc.weight, acc.households});
  }
  return out;
}

std::vector<GroupingSpec> default_groupings(Weighting weighting) {
  return {
      {{GroupDim::DwellingType, GroupDim::AreaBand}, weighting},
      {{GroupDim::Ev, GroupDim::Hp}, weighting},
      {{GroupDim::IncomeBand, GroupDim::Occupancy}, weighting},
  };
}

std::string group_averages_csv(const std::vector<std::string>& scenario_names,
                               const std::vector<std::vector<RedistributionRow>>& rows_per_scenario,
                               const HouseholdCounts& counts, const GroupingSpec& g) {
  std::string out = "scenario,group,mean_relative_change,mean_delta_ore_year,n_households_total\n";
  for (std::size_t s = 0; s < scenario_names.size(); ++s) {
    for (const auto& row : group_average(rows_per_scenario[s], counts, g)) {
      out += csv::quote(scenario_names[s]) + "," + row.group_label + "," + csv::format_double(row.mean_relative_change) +
             "," + csv::format_double(row.mean_delta_ore_year) + "," + std::to_string(row.n_households_total) +
             "\n";
    }
  }
  return out;
}

std::string ldc_csv(const LoadDurationCurve& ldc) {
  std::string out = "rank,load_mw\n";
  for (Eigen::Index i = 0; i < ldc.sorted_load.size(); ++i) {
    out += std::to_string(i + 1) + "," + csv::format_double(ldc.sorted_load[i]) + "\n";
  }
  return out;
}

void emit_reports(const std::vector<ScenarioOutcome>& outcomes, const std::vector<GroupingSpec>& groupings,
                  const ReportContext& ctx, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<const ScenarioResult*> ok;
  for (const auto& o : outcomes) {
    if (o.result) ok.push_back(&*o.result);
  }

  std::string rates = "scenario,base_ore_per_kwh,peak_ore_per_kwh\n";
  for (const auto* r : ok) {
    rates += csv::quote(r->spec.name) + "," + csv::format_double(r->rates.base_rate) + "," +
             csv::format_double(r->rates.peak_rate) + "\n";
  }
  csv::write_text(out_dir / "rates.csv", rates);
  csv::write_text(out_dir / "redistribution_delta.csv", redistribution_csv(ok, ctx.counts, false));
  csv::write_text(out_dir / "redistribution_relative.csv", redistribution_csv(ok, ctx.counts, true));

  std::string households = "category_id,n_households\n";
  for (const auto& [key, n] : ctx.counts) households += key.label() + "," + std::to_string(n) + "\n";
  csv::write_text(out_dir / "households.csv", households);

  std::vector<std::string> names;
  std::vector<std::vector<RedistributionRow>> rows;
  for (const auto* r : ok) {
    names.push_back(r->spec.name);
    rows.push_back(r->rows);
  }
  std::vector<std::string> files = {"rates.csv", "redistribution_delta.csv", "redistribution_relative.csv",
                                    "households.csv"};
  nlohmann::json grouping_json = nlohmann::json::array();
  for (const auto& g : groupings) {
    const std::string file = "group_averages_" + grouping_tag(g) + ".csv";
    csv::write_text(out_dir / file, group_averages_csv(names, rows, ctx.counts, g));
    files.push_back(file);
    grouping_json.push_back({{"dims", grouping_tag(g)}, {"weighting", weighting_name(g.weighting)}, {"file", file}});
  }
  csv::write_text(out_dir / "ldc.csv", ldc_csv(ctx.ldc));
  files.push_back("ldc.csv");

  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json s;
    s["name"] = o.spec.name;
    s["kind"] = std::string(design_kind_name(o.spec.design.kind));
    s["threshold_kwh"] = o.spec.design.threshold_kwh ? nlohmann::json(*o.spec.design.threshold_kwh) : nlohmann::json();
    s["trigger_fraction"] =
        o.spec.design.trigger_fraction ? nlohmann::json(*o.spec.design.trigger_fraction) : nlohmann::json();
    s["gt_base"] = o.spec.solver.gt_base;
    s["f_recov"] = o.spec.solver.f_recov;
    s["gt_flat"] = o.spec.gt_flat;
    if (o.result) {
      const auto& diag = o.result->diagnostics;
      s["status"] = "ok";
      s["diagnostics"] = {{"q_peak_kwh", diag.q_peak},
                          {"q_base_kwh", diag.q_base},
                          {"peak_hour_count", diag.peak_hour_count},
                          {"r_so_ore", diag.r_so}};
      nlohmann::json zero = nlohmann::json::array();
      for (const auto& row : o.result->rows) {
        if (row.zero_flat_bill) zero.push_back(row.key.label());
      }
      s["zero_flat_bill_categories"] = zero;
    } else {
      s["status"] = "failed";
      s["error"] = {{"code", std::string(error_code_name(o.failure->code))}, {"message", o.failure->message}};
    }
    scenarios.push_back(s);
  }

  nlohmann::json manifest;
  manifest["engine"] = "gridtariff";
  manifest["engine_version"] = kEngineVersion;
  manifest["model_revision"] = kModelRevision;
  manifest["dataset_hash"] = hex64(ctx.dataset_hash);
  manifest["config"] = ctx.config;
  manifest["groupings"] = grouping_json;
  manifest["scenarios"] = scenarios;
  manifest["files"] = files;
  csv::write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void report_from_results(const std::filesystem::path& results_dir, const GroupingSpec& g) {
  validate(g);
  HouseholdCounts counts;
  std::map<std::string, CategoryKey> key_of;
  const auto households_path = results_dir / "households.csv";
  csv::for_each_row(households_path, {"category_id", "n_households"}, [&](const auto& c, std::size_t line) {
    auto key = parse_category_label(c[0]);
    auto n = csv::parse_int(c[1]);
    if (!key || !n || *n < 1) {
      throw Error(ErrorCode::SchemaViolation, "households.csv:" + std::to_string(line) + ": bad row");
    }
    counts[*key] = static_cast<std::uint64_t>(*n);
    key_of[std::string(c[0])] = *key;
  });

  std::vector<std::string> delta_header, rel_header, delta_ids, rel_ids;
  const auto delta_path = results_dir / "redistribution_delta.csv";
  const auto rel_path = results_dir / "redistribution_relative.csv";
  auto deltas = read_columns(delta_path, delta_header, delta_ids);
  auto rels = read_columns(rel_path, rel_header, rel_ids);
  if (delta_header != rel_header || delta_ids != rel_ids) {
    throw Error(ErrorCode::SchemaViolation, "redistribution files disagree on scenarios or categories");
  }

  std::vector<std::string> names(delta_header.begin() + 1, delta_header.end());
  std::vector<std::vector<RedistributionRow>> rows;
  for (const auto& name : names) {
    std::vector<RedistributionRow> scenario_rows;
    for (std::size_t i = 0; i < delta_ids.size(); ++i) {
      auto it = key_of.find(delta_ids[i]);
      if (it == key_of.end()) {
        throw Error(ErrorCode::SchemaViolation, "category '" + delta_ids[i] + "' missing from households.csv");
      }
      RedistributionRow row;
      row.key = it->second;
      row.delta = parse_cell(deltas[name][i], delta_path);
      row.relative_change = parse_cell(rels[name][i], rel_path);
      scenario_rows.push_back(row);
    }
    rows.push_back(std::move(scenario_rows));
  }
  csv::write_text(results_dir / "group_averages.csv", group_averages_csv(names, rows, counts, g));
}

}  // namespace gridtariff
