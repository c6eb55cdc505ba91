#include "gridtariff/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gridtariff/calendar.hpp"
#include "gridtariff/csv.hpp"
#include "gridtariff/error.hpp"

namespace gridtariff {
namespace {

const std::vector<std::string> kObservedLabels = {
    "Ap_P1_A1_€1_EV0_HP0", "Ap_P1_A1_€1_EV0_HP1", "Ap_P1_A1_€2_EV0_HP0", "Ap_P1_A1_€2_EV0_HP1",
    "Ap_P1_A1_€3_EV0_HP0", "Ap_P1_A2_€1_EV0_HP0", "Ap_P1_A2_€1_EV0_HP1", "Ap_P1_A2_€2_EV0_HP0",
    "Ap_P1_A2_€2_EV0_HP1", "Ap_P1_A2_€3_EV0_HP0", "Ap_P1_A3_€1_EV0_HP0", "Ap_P1_A3_€1_EV0_HP1",
    "Ap_P1_A3_€2_EV0_HP0", "Ap_P1_A3_€2_EV0_HP1", "Ap_P1_A3_€3_EV0_HP0", "Ap_P2_A1_€1_EV0_HP0",
    "Ap_P2_A1_€1_EV0_HP1", "Ap_P2_A1_€2_EV0_HP0", "Ap_P2_A1_€2_EV0_HP1", "Ap_P2_A1_€3_EV0_HP0",
    "Ap_P2_A2_€1_EV0_HP0", "Ap_P2_A2_€1_EV0_HP1", "Ap_P2_A2_€2_EV0_HP0", "Ap_P2_A2_€2_EV0_HP1",
    "Ap_P2_A2_€3_EV0_HP0", "Ap_P2_A3_€1_EV0_HP0", "Ap_P2_A3_€1_EV0_HP1", "Ap_P2_A3_€2_EV0_HP0",
    "Ap_P2_A3_€2_EV0_HP1", "Ap_P2_A3_€3_EV0_HP0", "Ap_P2_A3_€3_EV0_HP1", "Ap_P3_A3_€3_EV0_HP0",
    "H_P1_A1_€1_EV0_HP0",  "H_P1_A1_€1_EV0_HP1",  "H_P1_A1_€2_EV0_HP0",  "H_P1_A1_€2_EV0_HP1",
    "H_P1_A1_€3_EV0_HP0",  "H_P1_A2_€1_EV0_HP0",  "H_P1_A2_€1_EV0_HP1",  "H_P1_A2_€2_EV0_HP0",
    "H_P1_A2_€2_EV0_HP1",  "H_P1_A2_€3_EV0_HP0",  "H_P1_A3_€1_EV0_HP0",  "H_P1_A3_€1_EV0_HP1",
    "H_P1_A3_€2_EV0_HP0",  "H_P1_A3_€2_EV0_HP1",  "H_P1_A3_€3_EV0_HP0",  "H_P2_A1_€1_EV0_HP0",
    "H_P2_A1_€2_EV0_HP0",  "H_P2_A1_€2_EV0_HP1",  "H_P2_A1_€3_EV0_HP0",  "H_P2_A1_€3_EV0_HP1",
    "H_P2_A2_€1_EV0_HP0",  "H_P2_A2_€1_EV0_HP1",  "H_P2_A2_€2_EV0_HP0",  "H_P2_A2_€2_EV0_HP1",
    "H_P2_A2_€3_EV0_HP0",  "H_P2_A2_€3_EV0_HP1",  "H_P2_A3_€2_EV0_HP0",  "H_P2_A3_€2_EV0_HP1",
    "H_P2_A3_€3_EV0_HP0",  "H_P2_A3_€3_EV0_HP1",  "H_P3_A1_€1_EV0_HP0",  "H_P3_A1_€2_EV0_HP0",
    "H_P3_A1_€3_EV0_HP0",  "H_P3_A1_€3_EV0_HP1",  "H_P3_A2_€1_EV0_HP0",  "H_P3_A2_€2_EV0_HP0",
    "H_P3_A2_€2_EV0_HP1",  "H_P3_A2_€3_EV0_HP0",  "H_P3_A2_€3_EV0_HP1",  "H_P3_A2_€3_EV1_HP0",
    "H_P3_A3_€1_EV0_HP0",  "H_P3_A3_€2_EV0_HP0",  "H_P3_A3_€2_EV0_HP1",  "H_P3_A3_€3_EV0_HP0",
    "H_P3_A3_€3_EV0_HP1",  "H_P3_A3_€3_EV1_HP0",  "H_P5+_A1_€1_EV0_HP0", "H_P5+_A1_€2_EV0_HP0",
    "H_P5+_A1_€3_EV0_HP0", "H_P5+_A2_€1_EV0_HP0", "H_P5+_A2_€2_EV0_HP0", "H_P5+_A2_€3_EV0_HP0",
    "H_P5+_A2_€3_EV0_HP1", "H_P5+_A3_€1_EV0_HP0", "H_P5+_A3_€2_EV0_HP0", "H_P5+_A3_€3_EV0_HP0",
    "H_P5+_A3_€3_EV0_HP1", "H_P5+_A3_€3_EV1_HP0",
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kColdestDay = 15;  // mid-January
constexpr int kNightStartHour = 22;
constexpr int kNightHours = 8;  // 22:00-06:00
constexpr int kDayStartHour = 7;
constexpr int kDayEndHour = 22;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_for(std::uint64_t seed, const std::string& tag) {
  return std::mt19937_64(splitmix64(seed ^ csv::fnv1a(tag)));
}

// Household component shared by every EV/HP variant of one dwelling,
// occupancy, area and income combination.
std::string archetype_tag(const CategoryKey& k) {
  CategoryKey base = k;
  base.ev = false;
  base.hp = false;
  return base.label();
}

double gaussian(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

double diurnal(int hour) {
  return 0.35 + 0.45 * gaussian(hour, 7.5, 1.5) + 1.0 * gaussian(hour, 18.5, 2.0);
}

double seasonal_phase(int day_of_year, int days) {
  return std::cos(kTwoPi * (day_of_year - kColdestDay) / days);
}

HourlySeries base_shape(int year, Eigen::Index hours) {
  const int days = days_in_year(year);
  HourlySeries shape(hours);
  for (Eigen::Index t = 0; t < hours; ++t) {
    const auto stamp = hour_stamp(year, static_cast<long>(t));
    shape[t] = diurnal(stamp.hour_of_day) * (1.0 + 0.25 * seasonal_phase(stamp.day_of_year, days));
  }
  return shape / shape.sum();
}

HourlySeries heating_shape(int year, Eigen::Index hours) {
  const int days = days_in_year(year);
  HourlySeries shape(hours);
  for (Eigen::Index t = 0; t < hours; ++t) {
    const auto stamp = hour_stamp(year, static_cast<long>(t));
    const double degree = std::max(0.0, 0.2 + seasonal_phase(stamp.day_of_year, days));
    const double h = stamp.hour_of_day;
    shape[t] = degree * (1.0 + 0.35 * gaussian(h, 7.0, 2.0) + 0.35 * gaussian(h, 18.0, 2.0));
  }
  return shape / shape.sum();
}

HourlySeries ev_sessions(const GeneratorConfig& cfg, const CategoryKey& key, Eigen::Index hours) {
  HourlySeries ev = HourlySeries::Zero(hours);
  const int days = static_cast<int>(hours / 24);
  if (cfg.ev_annual_kwh <= 0.0 || days == 0) return ev;

  const double per_day = cfg.ev_annual_kwh / days;
  const int duration = std::max(1, static_cast<int>(std::ceil(per_day / cfg.ev_charge_kw - 1e-12)));

  auto rng = stream_for(cfg.seed, key.label() + "/ev");
  std::vector<int> order(static_cast<std::size_t>(days));
  for (int i = 0; i < days; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const auto night_days = static_cast<int>(std::lround(cfg.night_charging_share * days));

  for (int n = 0; n < days; ++n) {
    const int day = order[static_cast<std::size_t>(n)];
    const bool night = n < night_days;
    int start_hour = 0;
    if (night) {
      std::uniform_int_distribution<int> pick(0, std::max(0, kNightHours - duration));
      start_hour = kNightStartHour + pick(rng);
    } else {
      std::uniform_int_distribution<int> pick(kDayStartHour, std::max(kDayStartHour, kDayEndHour - duration));
      start_hour = pick(rng);
    }
    double remaining = per_day;
    for (int k = 0; remaining > 0.0; ++k) {
      const double e = std::min(cfg.ev_charge_kw, remaining);
      const auto t = (static_cast<Eigen::Index>(day) * 24 + start_hour + k) % hours;
      ev[t] += e;
      remaining -= e;
    }
  }
  return ev * (cfg.ev_annual_kwh / ev.sum());
}

HourlySeries noisy(const HourlySeries& shape, const GeneratorConfig& cfg, const CategoryKey& key) {
  if (cfg.noise_amplitude == 0.0) return shape;
  const double a = cfg.noise_amplitude;
  const double sigma = std::sqrt(std::log1p(a * a));
  std::lognormal_distribution<double> dist(-0.5 * sigma * sigma, sigma);
  auto rng = stream_for(cfg.seed, archetype_tag(key) + "/noise");
  HourlySeries out(shape.size());
  for (Eigen::Index t = 0; t < shape.size(); ++t) out[t] = shape[t] * dist(rng);
  return out * (shape.sum() / out.sum());
}

double band_energy(const GeneratorConfig& cfg, const CategoryKey& key) {
  return cfg.base_annual_kwh * cfg.occupancy_factors[static_cast<int>(key.occupancy)] *
         cfg.area_factors[static_cast<int>(key.area_band)] *
         cfg.income_factors[static_cast<int>(key.income_band)];
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

template <std::size_t N>
void from_band_object(const nlohmann::json& j, const char* name, const std::array<std::string_view, N>& tokens,
                      std::array<double, N>& out) {
  if (!j.contains(name)) return;
  const auto& obj = j.at(name);
  if (!obj.is_object()) invalid(std::string(name) + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    auto it = std::find(tokens.begin(), tokens.end(), k);
    if (it == tokens.end()) invalid(std::string(name) + ": unknown band '" + k + "'");
    out[static_cast<std::size_t>(it - tokens.begin())] = v.template get<double>();
  }
}

template <std::size_t N>
nlohmann::json band_object(const std::array<std::string_view, N>& tokens, const std::array<double, N>& values) {
  nlohmann::json obj = nlohmann::json::object();
  for (std::size_t i = 0; i < N; ++i) obj[std::string(tokens[i])] = values[i];
  return obj;
}

constexpr std::array<std::string_view, 4> kOccTokens = {"P1", "P2", "P3", "P5+"};
constexpr std::array<std::string_view, 3> kAreaTokens = {"A1", "A2", "A3"};
constexpr std::array<std::string_view, 3> kIncomeTokens = {"E1", "E2", "E3"};

}  // namespace

const std::vector<std::string>& observed_category_labels() { return kObservedLabels; }

std::uint64_t default_household_count(const CategoryKey& key) {
  static constexpr double kApartment[] = {30000, 17000, 7000, 1500};
  static constexpr double kHouse[] = {9000, 21000, 16000, 6000};
  static constexpr double kArea[] = {1.2, 1.0, 0.8};
  double n = key.dwelling_type == DwellingType::AP ? kApartment[static_cast<int>(key.occupancy)]
                                                   : kHouse[static_cast<int>(key.occupancy)];
  n *= kArea[static_cast<int>(key.area_band)];
  if (key.hp) n *= 0.3;
  if (key.ev) n *= 0.08;
  return static_cast<std::uint64_t>(std::llround(n));
}

double expected_annual_kwh(const GeneratorConfig& cfg, const CategoryKey& key) {
  return band_energy(cfg, key) + (key.hp ? cfg.hp_annual_kwh : 0.0) + (key.ev ? cfg.ev_annual_kwh : 0.0);
}

void validate(const GeneratorConfig& cfg) {
  if (cfg.year < 1900 || cfg.year > 2200) invalid("year out of range");
  if (!(cfg.base_annual_kwh > 0.0)) invalid("base_annual_kwh must be > 0");
  for (double f : cfg.occupancy_factors) if (!(f > 0.0)) invalid("occupancy_factors must be > 0");
  for (double f : cfg.area_factors) if (!(f > 0.0)) invalid("area_factors must be > 0");
  for (double f : cfg.income_factors) if (!(f > 0.0)) invalid("income_factors must be > 0");
  if (!(cfg.hp_annual_kwh >= 0.0)) invalid("hp_annual_kwh must be >= 0");
  if (!(cfg.ev_annual_kwh >= 0.0)) invalid("ev_annual_kwh must be >= 0");
  if (!(cfg.ev_charge_kw > 0.0)) invalid("ev_charge_kw must be > 0");
  if (!(cfg.night_charging_share >= 0.0 && cfg.night_charging_share <= 1.0)) {
    invalid("night_charging_share must lie in [0, 1]");
  }
  if (!(cfg.noise_amplitude >= 0.0 && cfg.noise_amplitude <= 0.5)) {
    invalid("noise_amplitude must lie in [0, 0.5]");
  }
  if (!(cfg.industrial_baseline_mw >= 0.0) || !std::isfinite(cfg.industrial_baseline_mw)) {
    invalid("industrial_baseline_mw must be >= 0");
  }
  if (cfg.default_households && *cfg.default_households < 1) invalid("default_households must be >= 1");
  for (const auto& [label, n] : cfg.households) {
    if (!parse_category_label(label)) invalid("households: bad category label '" + label + "'");
    if (n < 1) invalid("households: count for " + label + " must be >= 1");
  }
  std::set<std::string> seen;
  for (const auto& label : cfg.categories) {
    if (!parse_category_label(label)) invalid("categories: bad category label '" + label + "'");
    if (!seen.insert(label).second) invalid("categories: duplicate label '" + label + "'");
  }
}

void to_json(nlohmann::json& j, const GeneratorConfig& cfg) {
  j = nlohmann::json::object();
  j["year"] = cfg.year;
  j["seed"] = cfg.seed;
  j["default_households"] = cfg.default_households ? nlohmann::json(*cfg.default_households) : nlohmann::json();
  j["households"] = cfg.households;
  j["base_annual_kwh"] = cfg.base_annual_kwh;
  j["occupancy_factors"] = band_object(kOccTokens, cfg.occupancy_factors);
  j["area_factors"] = band_object(kAreaTokens, cfg.area_factors);
  j["income_factors"] = band_object(kIncomeTokens, cfg.income_factors);
  j["hp_annual_kwh"] = cfg.hp_annual_kwh;
  j["ev_annual_kwh"] = cfg.ev_annual_kwh;
  j["ev_charge_kw"] = cfg.ev_charge_kw;
  j["night_charging_share"] = cfg.night_charging_share;
  j["noise_amplitude"] = cfg.noise_amplitude;
  j["industrial_baseline_mw"] = cfg.industrial_baseline_mw;
  j["categories"] = cfg.categories;
}

void from_json(const nlohmann::json& j, GeneratorConfig& cfg) {
  static const std::set<std::string> known = {
      "year", "seed", "default_households", "households", "base_annual_kwh", "occupancy_factors",
      "area_factors", "income_factors", "hp_annual_kwh", "ev_annual_kwh", "ev_charge_kw",
      "night_charging_share", "noise_amplitude", "industrial_baseline_mw", "categories"};
  if (!j.is_object()) invalid("generator config must be a JSON object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (!known.contains(k)) invalid("unknown generator config key '" + k + "'");
    }
    if (j.contains("year")) cfg.year = j.at("year").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("default_households")) {
      const auto& v = j.at("default_households");
      if (v.is_null()) {
        cfg.default_households.reset();
      } else {
        cfg.default_households = v.get<std::uint64_t>();
      }
    }
    if (j.contains("households")) cfg.households = j.at("households").get<std::map<std::string, std::uint64_t>>();
    if (j.contains("base_annual_kwh")) cfg.base_annual_kwh = j.at("base_annual_kwh").get<double>();
    from_band_object(j, "occupancy_factors", kOccTokens, cfg.occupancy_factors);
    from_band_object(j, "area_factors", kAreaTokens, cfg.area_factors);
    from_band_object(j, "income_factors", kIncomeTokens, cfg.income_factors);
    if (j.contains("hp_annual_kwh")) cfg.hp_annual_kwh = j.at("hp_annual_kwh").get<double>();
    if (j.contains("ev_annual_kwh")) cfg.ev_annual_kwh = j.at("ev_annual_kwh").get<double>();
    if (j.contains("ev_charge_kw")) cfg.ev_charge_kw = j.at("ev_charge_kw").get<double>();
    if (j.contains("night_charging_share")) cfg.night_charging_share = j.at("night_charging_share").get<double>();
    if (j.contains("noise_amplitude")) cfg.noise_amplitude = j.at("noise_amplitude").get<double>();
    if (j.contains("industrial_baseline_mw")) {
      cfg.industrial_baseline_mw = j.at("industrial_baseline_mw").get<double>();
    }
    if (j.contains("categories")) cfg.categories = j.at("categories").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("generator config: ") + e.what());
  }
}

Dataset generate_dataset(const GeneratorConfig& cfg) {
  validate(cfg);
  const Eigen::Index hours = hours_in_year(cfg.year);
  const HourlySeries base = base_shape(cfg.year, hours);
  const HourlySeries heating = heating_shape(cfg.year, hours);

  const auto& labels = cfg.categories.empty() ? kObservedLabels : cfg.categories;
  std::vector<CategoryRecord> records;
  records.reserve(labels.size());
  for (const auto& label : labels) {
    CategoryRecord rec;
    rec.key = *parse_category_label(label);
    if (auto it = cfg.households.find(label); it != cfg.households.end()) {
      rec.n_households = it->second;
    } else {
      rec.n_households = cfg.default_households.value_or(default_household_count(rec.key));
    }
    rec.hourly_kwh = noisy(base, cfg, rec.key) * band_energy(cfg, rec.key);
    if (rec.key.hp) rec.hourly_kwh += heating * cfg.hp_annual_kwh;
    if (rec.key.ev) rec.hourly_kwh += ev_sessions(cfg, rec.key, hours);
    records.push_back(std::move(rec));
  }

  SystemLoad load = derive_system_load(records, cfg.industrial_baseline_mw);
  return Dataset(cfg.year, std::move(records), std::move(load));
}

SystemLoad derive_system_load(const std::vector<CategoryRecord>& categories, double industrial_baseline_mw) {
  SystemLoad load;
  if (categories.empty()) return load;
  load.hourly_load = HourlySeries::Constant(categories.front().hourly_kwh.size(), industrial_baseline_mw);
  HourlySeries households_mw = HourlySeries::Zero(load.hourly_load.size());
  for (const auto& rec : categories) {
    households_mw += rec.hourly_kwh * static_cast<double>(rec.n_households);
  }
  load.hourly_load += households_mw / 1000.0;
  return load;
}

SystemLoad derive_system_load(const Dataset& d, double industrial_baseline_mw) {
  return derive_system_load(d.categories(), industrial_baseline_mw);
}

void write_generated(const Dataset& d, const GeneratorConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  write_dataset(d, DatasetPaths::in_directory(dir));
  nlohmann::json provenance;
  provenance["generator"] = "gridtariff synthgen";
  provenance["year"] = d.year();
  provenance["hours"] = d.hours();
  provenance["categories"] = d.categories().size();
  provenance["config"] = cfg;
  csv::write_text(dir / "provenance.json", provenance.dump(2) + "\n");
}

}  // namespace gridtariff
