#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridtariff/category.hpp"

namespace gridtariff {

// Hourly series; index 0 is Jan 1 00:00 of the dataset year, fixed offset.
using HourlySeries = Eigen::VectorXd;

struct CategoryRecord {
  CategoryKey key;
  std::uint64_t n_households = 1;
  HourlySeries hourly_kwh;  // kWh per household per hour
};

struct SystemLoad {
  HourlySeries hourly_load;  // MW
};

// Validated, immutable input to every scenario. Categories are stored in
// canonical label order.
class Dataset {
 public:
  Dataset(int year, std::vector<CategoryRecord> categories, SystemLoad system_load);

  int year() const noexcept { return year_; }
  Eigen::Index hours() const noexcept { return system_load_.hourly_load.size(); }
  const std::vector<CategoryRecord>& categories() const noexcept { return categories_; }
  const SystemLoad& system_load() const noexcept { return system_load_; }

  // Throws SchemaViolation when the key is absent.
  const CategoryRecord& category(const CategoryKey& key) const;
  bool contains(const CategoryKey& key) const;

  Dataset with_system_load(SystemLoad system_load) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  int year_;
  std::vector<CategoryRecord> categories_;
  SystemLoad system_load_;
};

void validate(const CategoryRecord& rec, Eigen::Index hours);
void validate(const SystemLoad& load);

struct ConsumptionTotals {
  std::map<CategoryKey, double> per_household_kwh;
  double grand_total_kwh = 0.0;
};

ConsumptionTotals total_consumption(const Dataset& d);

std::map<CategoryKey, std::uint64_t> household_counts(const Dataset& d);

int hours_in_year(int year);

struct DatasetPaths {
  std::filesystem::path categories;
  std::filesystem::path profiles;
  std::filesystem::path system_load;

  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

// Reads categories.csv / profiles.csv / system_load.csv. The CSV files do not
// carry the calendar year, so it is passed in (the CLI reads it from the
// provenance file when one exists).
Dataset load_dataset(const DatasetPaths& paths, int year = 2017);

// Writes the three files; category_id is the canonical label.
void write_dataset(const Dataset& d, const DatasetPaths& paths);

// FNV-1a over the canonical on-disk byte representation.
std::uint64_t dataset_hash(const Dataset& d);

}  // namespace gridtariff
