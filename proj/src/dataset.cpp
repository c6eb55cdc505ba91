#include "gridtariff/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <unordered_map>

#include "gridtariff/csv.hpp"
#include "gridtariff/error.hpp"

namespace gridtariff {
namespace {

const std::vector<std::string> kCategoriesHeader = {
    "category_id", "dwelling_type", "occupancy", "area_band", "income_band", "ev", "hp", "n_households"};
const std::vector<std::string> kProfilesHeader = {"category_id", "hour", "kwh_per_household"};
const std::vector<std::string> kSystemLoadHeader = {"hour", "load_mw"};

[[noreturn]] void schema_error(const std::filesystem::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation,
              file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_bit(std::string_view s, bool& out) {
  if (s == "0") {
    out = false;
    return true;
  }
  if (s == "1") {
    out = true;
    return true;
  }
  return false;
}

std::string categories_csv(const Dataset& d) {
  std::string out = "category_id,dwelling_type,occupancy,area_band,income_band,ev,hp,n_households\n";
  for (const auto& rec : d.categories()) {
    const auto& k = rec.key;
    out += k.label();
    out += ',';
    out += csv_token(k.dwelling_type);
    out += ',';
    out += csv_token(k.occupancy);
    out += ',';
    out += csv_token(k.area_band);
    out += ',';
    out += csv_token(k.income_band);
    out += k.ev ? ",1" : ",0";
    out += k.hp ? ",1," : ",0,";
    out += std::to_string(rec.n_households);
    out += '\n';
  }
  return out;
}

std::string profiles_csv(const Dataset& d) {
  std::string out = "category_id,hour,kwh_per_household\n";
  out.reserve(static_cast<std::size_t>(d.hours()) * d.categories().size() * 36);
  for (const auto& rec : d.categories()) {
    const std::string label = rec.key.label();
    for (Eigen::Index t = 0; t < rec.hourly_kwh.size(); ++t) {
      out += label;
      out += ',';
      out += std::to_string(t);
      out += ',';
      out += csv::format_double(rec.hourly_kwh[t]);
      out += '\n';
    }
  }
  return out;
}

std::string system_load_csv(const Dataset& d) {
  std::string out = "hour,load_mw\n";
  const auto& load = d.system_load().hourly_load;
  for (Eigen::Index t = 0; t < load.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += csv::format_double(load[t]);
    out += '\n';
  }
  return out;
}

}  // namespace

int hours_in_year(int year) {
  return std::chrono::year{year}.is_leap() ? 8784 : 8760;
}

void validate(const CategoryRecord& rec, Eigen::Index hours) {
  const std::string label = rec.key.label();
  if (rec.n_households < 1) {
    throw Error(ErrorCode::SchemaViolation, label + ": n_households must be >= 1");
  }
  if (rec.hourly_kwh.size() != hours) {
    throw Error(ErrorCode::LengthMismatch, label + ": profile has " +
                                               std::to_string(rec.hourly_kwh.size()) + " hours, expected " +
                                               std::to_string(hours));
  }
  if (!rec.hourly_kwh.allFinite()) throw Error(ErrorCode::SchemaViolation, label + ": non-finite load");
  if (hours > 0 && rec.hourly_kwh.minCoeff() < 0.0) {
    throw Error(ErrorCode::NegativeValue, label + ": negative hourly consumption");
  }
}

void validate(const SystemLoad& load) {
  const auto& v = load.hourly_load;
  if (v.size() == 0) throw Error(ErrorCode::LengthMismatch, "system load is empty");
  if (!v.allFinite()) throw Error(ErrorCode::SchemaViolation, "system load has non-finite values");
  if (v.minCoeff() < 0.0) throw Error(ErrorCode::NegativeValue, "system load has negative values");
  if (v.minCoeff() == v.maxCoeff()) {
    throw Error(ErrorCode::DegenerateLoad, "system load is constant; peak hours would be arbitrary");
  }
}

Dataset::Dataset(int year, std::vector<CategoryRecord> categories, SystemLoad system_load)
    : year_(year), categories_(std::move(categories)), system_load_(std::move(system_load)) {
  if (categories_.empty()) throw Error(ErrorCode::SchemaViolation, "dataset has no categories");
  validate(system_load_);
  std::sort(categories_.begin(), categories_.end(),
            [](const CategoryRecord& a, const CategoryRecord& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (i > 0 && categories_[i].key == categories_[i - 1].key) {
      throw Error(ErrorCode::SchemaViolation, "duplicate category " + categories_[i].key.label());
    }
    validate(categories_[i], hours());
  }
}

const CategoryRecord& Dataset::category(const CategoryKey& key) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), key,
                             [](const CategoryRecord& r, const CategoryKey& k) { return r.key < k; });
  if (it == categories_.end() || it->key != key) {
    throw Error(ErrorCode::SchemaViolation, "unknown category " + key.label());
  }
  return *it;
}

bool Dataset::contains(const CategoryKey& key) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), key,
                             [](const CategoryRecord& r, const CategoryKey& k) { return r.key < k; });
  return it != categories_.end() && it->key == key;
}

Dataset Dataset::with_system_load(SystemLoad system_load) const {
  return Dataset(year_, categories_, std::move(system_load));
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.year_ != b.year_ || a.categories_.size() != b.categories_.size()) return false;
  if (a.system_load_.hourly_load != b.system_load_.hourly_load) return false;
  for (std::size_t i = 0; i < a.categories_.size(); ++i) {
    const auto& x = a.categories_[i];
    const auto& y = b.categories_[i];
    if (x.key != y.key || x.n_households != y.n_households || x.hourly_kwh != y.hourly_kwh) return false;
  }
  return true;
}

ConsumptionTotals total_consumption(const Dataset& d) {
  ConsumptionTotals totals;
  for (const auto& rec : d.categories()) {
    const double annual = rec.hourly_kwh.sum();
    totals.per_household_kwh.emplace(rec.key, annual);
    totals.grand_total_kwh += static_cast<double>(rec.n_households) * annual;
  }
  return totals;
}

std::map<CategoryKey, std::uint64_t> household_counts(const Dataset& d) {
  std::map<CategoryKey, std::uint64_t> counts;
  for (const auto& rec : d.categories()) counts.emplace(rec.key, rec.n_households);
  return counts;
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "categories.csv", dir / "profiles.csv", dir / "system_load.csv"};
}

Dataset load_dataset(const DatasetPaths& paths, int year) {
  struct Meta {
    CategoryKey key;
    std::uint64_t n_households;
  };
  std::unordered_map<std::string, Meta> meta;
  std::set<CategoryKey> seen_keys;

  csv::for_each_row(paths.categories, kCategoriesHeader, [&](const auto& c, std::size_t line) {
    CategoryKey key;
    auto dwelling = parse_dwelling_csv(c[1]);
    auto occupancy = parse_occupancy_csv(c[2]);
    auto area = parse_area_csv(c[3]);
    auto income = parse_income_csv(c[4]);
    if (!dwelling) schema_error(paths.categories, line, "bad dwelling_type '" + std::string(c[1]) + "'");
    if (!occupancy) schema_error(paths.categories, line, "bad occupancy '" + std::string(c[2]) + "'");
    if (!area) schema_error(paths.categories, line, "bad area_band '" + std::string(c[3]) + "'");
    if (!income) schema_error(paths.categories, line, "bad income_band '" + std::string(c[4]) + "'");
    key.dwelling_type = *dwelling;
    key.occupancy = *occupancy;
    key.area_band = *area;
    key.income_band = *income;
    if (!parse_bit(c[5], key.ev)) schema_error(paths.categories, line, "ev must be 0 or 1");
    if (!parse_bit(c[6], key.hp)) schema_error(paths.categories, line, "hp must be 0 or 1");
    auto n = csv::parse_int(c[7]);
    if (!n || *n < 1) schema_error(paths.categories, line, "n_households must be a positive integer");
    if (c[0].empty()) schema_error(paths.categories, line, "empty category_id");
    if (!meta.emplace(std::string(c[0]), Meta{key, static_cast<std::uint64_t>(*n)}).second) {
      schema_error(paths.categories, line, "duplicate category_id '" + std::string(c[0]) + "'");
    }
    if (!seen_keys.insert(key).second) {
      schema_error(paths.categories, line, "duplicate category " + key.label());
    }
  });

  std::vector<double> load;
  std::vector<bool> load_seen;
  csv::for_each_row(paths.system_load, kSystemLoadHeader, [&](const auto& c, std::size_t line) {
    auto hour = csv::parse_int(c[0]);
    auto value = csv::parse_double(c[1]);
    if (!hour || *hour < 0) schema_error(paths.system_load, line, "bad hour");
    if (!value || !std::isfinite(*value)) schema_error(paths.system_load, line, "non-numeric load_mw");
    if (*value < 0.0) {
      throw Error(ErrorCode::NegativeValue, paths.system_load.filename().string() + ":" +
                                                std::to_string(line) + ": negative load");
    }
    auto h = static_cast<std::size_t>(*hour);
    if (h >= load.size()) {
      load.resize(h + 1, 0.0);
      load_seen.resize(h + 1, false);
    }
    if (load_seen[h]) schema_error(paths.system_load, line, "duplicate hour");
    load[h] = *value;
    load_seen[h] = true;
  });
  if (std::find(load_seen.begin(), load_seen.end(), false) != load_seen.end() || load.empty()) {
    throw Error(ErrorCode::LengthMismatch, "system_load.csv: hours must cover 0..T-1 contiguously");
  }
  const auto hours = static_cast<Eigen::Index>(load.size());

  struct Pending {
    std::vector<double> values;
    std::vector<bool> seen;
    std::size_t count = 0;
  };
  std::unordered_map<std::string, Pending> pending;
  csv::for_each_row(paths.profiles, kProfilesHeader, [&](const auto& c, std::size_t line) {
    auto it = meta.find(std::string(c[0]));
    if (it == meta.end()) {
      schema_error(paths.profiles, line, "category_id '" + std::string(c[0]) + "' has no metadata row");
    }
    auto hour = csv::parse_int(c[1]);
    auto value = csv::parse_double(c[2]);
    if (!hour) schema_error(paths.profiles, line, "non-numeric hour");
    if (!value || !std::isfinite(*value)) schema_error(paths.profiles, line, "non-numeric kwh_per_household");
    if (*hour < 0 || *hour >= hours) {
      throw Error(ErrorCode::LengthMismatch, paths.profiles.filename().string() + ":" + std::to_string(line) +
                                                 ": hour outside [0, " + std::to_string(hours) + ")");
    }
    if (*value < 0.0) {
      throw Error(ErrorCode::NegativeValue, paths.profiles.filename().string() + ":" +
                                                std::to_string(line) + ": negative consumption");
    }
    auto& p = pending[it->first];
    if (p.values.empty()) {
      p.values.assign(static_cast<std::size_t>(hours), 0.0);
      p.seen.assign(static_cast<std::size_t>(hours), false);
    }
    auto h = static_cast<std::size_t>(*hour);
    if (p.seen[h]) schema_error(paths.profiles, line, "duplicate hour for " + it->first);
    p.seen[h] = true;
    p.values[h] = *value;
    ++p.count;
  });

  std::vector<CategoryRecord> records;
  records.reserve(meta.size());
  for (const auto& [id, m] : meta) {
    auto it = pending.find(id);
    if (it == pending.end()) {
      throw Error(ErrorCode::SchemaViolation, "category_id '" + id + "' has no profile rows");
    }
    if (it->second.count != static_cast<std::size_t>(hours)) {
      throw Error(ErrorCode::LengthMismatch, "category_id '" + id + "' has " +
                                                 std::to_string(it->second.count) + " hours, expected " +
                                                 std::to_string(hours));
    }
    CategoryRecord rec;
    rec.key = m.key;
    rec.n_households = m.n_households;
    rec.hourly_kwh = Eigen::Map<const HourlySeries>(it->second.values.data(), hours);
    records.push_back(std::move(rec));
  }

  SystemLoad sl;
  sl.hourly_load = Eigen::Map<const HourlySeries>(load.data(), hours);
  return Dataset(year, std::move(records), std::move(sl));
}

void write_dataset(const Dataset& d, const DatasetPaths& paths) {
  csv::write_text(paths.categories, categories_csv(d));
  csv::write_text(paths.profiles, profiles_csv(d));
  csv::write_text(paths.system_load, system_load_csv(d));
}

std::uint64_t dataset_hash(const Dataset& d) {
  std::uint64_t h = csv::fnv1a(std::to_string(d.year()));
  h = csv::fnv1a(categories_csv(d), h);
  h = csv::fnv1a(profiles_csv(d), h);
  h = csv::fnv1a(system_load_csv(d), h);
  return h;
}

}  // namespace gridtariff
