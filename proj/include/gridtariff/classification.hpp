#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridtariff/dataset.hpp"

namespace gridtariff {

enum class DesignKind { Flat, TOU, IPP, DCPP, DCIPP };

std::string_view design_kind_name(DesignKind kind);
std::optional<DesignKind> parse_design_kind(std::string_view s);  // case-insensitive

struct TouWindow {
  int start_hour = 17;
  int end_hour_exclusive = 20;
  std::set<unsigned> months = {10, 11, 12, 1, 2, 3};

  friend bool operator==(const TouWindow&, const TouWindow&) = default;
};

// A tariff design and exactly the parameters its kind uses.
struct DesignSpec {
  DesignKind kind = DesignKind::Flat;
  std::optional<double> threshold_kwh;     // IPP, DCIPP
  std::optional<double> trigger_fraction;  // DCPP, DCIPP
  std::optional<TouWindow> tou_window;     // TOU

  static DesignSpec flat();
  static DesignSpec tou(TouWindow window = {});
  static DesignSpec ipp(double threshold_kwh);
  static DesignSpec dcpp(double trigger_fraction);
  static DesignSpec dcipp(double threshold_kwh, double trigger_fraction);

  bool uses_peak_hours() const;

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;
};

// Throws MissingThreshold, InvalidDesign.
void validate(const DesignSpec& spec);

enum class PeakHourSource { Trigger, TouSchedule, Empty };

struct PeakHourSet {
  std::vector<Eigen::Index> hours;  // ascending
  PeakHourSource source = PeakHourSource::Empty;
  double trigger_fraction = 0.0;

  bool contains(Eigen::Index t) const;
  // 1.0 at peak hours, 0.0 elsewhere.
  Eigen::ArrayXd mask(Eigen::Index total_hours) const;
};

struct LoadDurationCurve {
  HourlySeries sorted_load;  // non-increasing
};

struct Classification {
  CategoryKey key;
  double q_peak_year = 0.0;  // kWh per household
  double q_base_year = 0.0;
};

LoadDurationCurve load_duration_curve(const SystemLoad& sl);

// Number of trigger hours: p*T rounded half-up.
Eigen::Index trigger_hour_count(double trigger_fraction, Eigen::Index total_hours);

// The round(p*T) highest-load hours; among equal loads the lower hour index
// ranks higher. Throws DegenerateLoad for a constant series.
PeakHourSet peak_hour_set(const SystemLoad& sl, double trigger_fraction);

// Hours whose local month is in the window and whose hour-of-day lies in
// [start_hour, end_hour_exclusive). Throws LengthMismatch unless `total_hours`
// is the full calendar year.
PeakHourSet tou_hour_set(int year, const TouWindow& window, Eigen::Index total_hours);

// IPP and DCIPP compare with >=: an hour exactly at the threshold is peak,
// and the hour's entire consumption goes to the peak bucket.
Classification classify_category(const CategoryRecord& rec, const DesignSpec& spec,
                                 const PeakHourSet* peak_hours);

// Builds the peak-hour set the design needs (once), then classifies every
// category.
std::map<CategoryKey, Classification> classify_all(const Dataset& d, const DesignSpec& spec);

// Peak-hour set the design needs, or nullopt for Flat / IPP.
std::optional<PeakHourSet> peak_hours_for(const Dataset& d, const DesignSpec& spec);

}  // namespace gridtariff
