#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridtariff/category.hpp"
#include "gridtariff/dataset.hpp"
#include "gridtariff/synthgen.hpp"

namespace fixture {

inline gridtariff::CategoryKey key(std::string_view label) { return gridtariff::parse_category_label(label).value(); }

inline gridtariff::HourlySeries series(std::initializer_list<double> values) {
  gridtariff::HourlySeries s(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) s[i++] = v;
  return s;
}

inline gridtariff::CategoryRecord record(std::string_view label, gridtariff::HourlySeries kwh,
                                         std::uint64_t households = 1) {
  return {key(label), households, std::move(kwh)};
}

inline gridtariff::SystemLoad load(gridtariff::HourlySeries mw) { return {std::move(mw)}; }

// The 4-hour single-category toy: profile [0.5, 2, 0.5, 3], load [10, 40, 20, 30].
inline gridtariff::Dataset toy(std::uint64_t households = 1) {
  return gridtariff::Dataset(2017, {record("Ap_P1_A1_€1_EV0_HP0", series({0.5, 2.0, 0.5, 3.0}), households)},
                             load(series({10, 40, 20, 30})));
}

inline const gridtariff::Dataset& synthetic() {
  static const gridtariff::Dataset d = gridtariff::generate_dataset(gridtariff::GeneratorConfig{});
  return d;
}

inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gridtariff_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline double rel_err(double a, double b, double scale = 0.0) {
  const double m = std::max({std::abs(a), std::abs(b), scale});
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

}  // namespace fixture
