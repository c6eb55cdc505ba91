#include "gridtariff/classification.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "gridtariff/calendar.hpp"
#include "gridtariff/error.hpp"

namespace gridtariff {

std::string_view design_kind_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::Flat: return "Flat";
    case DesignKind::TOU: return "TOU";
    case DesignKind::IPP: return "IPP";
    case DesignKind::DCPP: return "DCPP";
    case DesignKind::DCIPP: return "DCIPP";
  }
  return "?";
}

std::optional<DesignKind> parse_design_kind(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "flat") return DesignKind::Flat;
  if (lower == "tou") return DesignKind::TOU;
  if (lower == "ipp") return DesignKind::IPP;
  if (lower == "dcpp") return DesignKind::DCPP;
  if (lower == "dcipp") return DesignKind::DCIPP;
  return std::nullopt;
}

DesignSpec DesignSpec::flat() { return {}; }

DesignSpec DesignSpec::tou(TouWindow window) {
  DesignSpec s;
  s.kind = DesignKind::TOU;
  s.tou_window = std::move(window);
  return s;
}

DesignSpec DesignSpec::ipp(double threshold_kwh) {
  DesignSpec s;
  s.kind = DesignKind::IPP;
  s.threshold_kwh = threshold_kwh;
  return s;
}

DesignSpec DesignSpec::dcpp(double trigger_fraction) {
  DesignSpec s;
  s.kind = DesignKind::DCPP;
  s.trigger_fraction = trigger_fraction;
  return s;
}

DesignSpec DesignSpec::dcipp(double threshold_kwh, double trigger_fraction) {
  DesignSpec s;
  s.kind = DesignKind::DCIPP;
  s.threshold_kwh = threshold_kwh;
  s.trigger_fraction = trigger_fraction;
  return s;
}

bool DesignSpec::uses_peak_hours() const {
  return kind == DesignKind::TOU || kind == DesignKind::DCPP || kind == DesignKind::DCIPP;
}

void validate(const DesignSpec& spec) {
  const bool wants_threshold = spec.kind == DesignKind::IPP || spec.kind == DesignKind::DCIPP;
  const bool wants_trigger = spec.kind == DesignKind::DCPP || spec.kind == DesignKind::DCIPP;
  const bool wants_window = spec.kind == DesignKind::TOU;
  const std::string name(design_kind_name(spec.kind));

  if (wants_threshold && !spec.threshold_kwh) {
    throw Error(ErrorCode::MissingThreshold, name + " requires a threshold");
  }
  if (!wants_threshold && spec.threshold_kwh) {
    throw Error(ErrorCode::InvalidDesign, name + " does not take a threshold");
  }
  if (wants_trigger && !spec.trigger_fraction) {
    throw Error(ErrorCode::InvalidDesign, name + " requires a trigger fraction");
  }
  if (!wants_trigger && spec.trigger_fraction) {
    throw Error(ErrorCode::InvalidDesign, name + " does not take a trigger fraction");
  }
  if (wants_window && !spec.tou_window) throw Error(ErrorCode::InvalidDesign, "TOU requires a schedule window");
  if (!wants_window && spec.tou_window) {
    throw Error(ErrorCode::InvalidDesign, name + " does not take a schedule window");
  }
  if (spec.threshold_kwh && !(*spec.threshold_kwh > 0.0 && std::isfinite(*spec.threshold_kwh))) {
    throw Error(ErrorCode::InvalidDesign, "threshold must be a positive energy");
  }
  if (spec.trigger_fraction && !(*spec.trigger_fraction > 0.0 && *spec.trigger_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidDesign, "trigger fraction must lie in (0, 1]");
  }
  if (spec.tou_window) {
    const auto& w = *spec.tou_window;
    if (w.start_hour < 0 || w.end_hour_exclusive > 24 || w.start_hour >= w.end_hour_exclusive) {
      throw Error(ErrorCode::InvalidDesign, "TOU window hours must satisfy 0 <= start < end <= 24");
    }
    if (w.months.empty()) throw Error(ErrorCode::InvalidDesign, "TOU window needs at least one month");
    for (unsigned m : w.months) {
      if (m < 1 || m > 12) throw Error(ErrorCode::InvalidDesign, "TOU months must lie in 1..12");
    }
  }
}

bool PeakHourSet::contains(Eigen::Index t) const {
  return std::binary_search(hours.begin(), hours.end(), t);
}

Eigen::ArrayXd PeakHourSet::mask(Eigen::Index total_hours) const {
  Eigen::ArrayXd m = Eigen::ArrayXd::Zero(total_hours);
  for (auto t : hours) m[t] = 1.0;
  return m;
}

LoadDurationCurve load_duration_curve(const SystemLoad& sl) {
  LoadDurationCurve ldc;
  ldc.sorted_load = sl.hourly_load;
  std::sort(ldc.sorted_load.begin(), ldc.sorted_load.end(), std::greater<>());
  return ldc;
}

Eigen::Index trigger_hour_count(double trigger_fraction, Eigen::Index total_hours) {
  return static_cast<Eigen::Index>(std::floor(trigger_fraction * static_cast<double>(total_hours) + 0.5));
}

PeakHourSet peak_hour_set(const SystemLoad& sl, double trigger_fraction) {
  if (!(trigger_fraction > 0.0 && trigger_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidDesign, "trigger fraction must lie in (0, 1]");
  }
  const auto& load = sl.hourly_load;
  const Eigen::Index total = load.size();
  if (total == 0 || load.minCoeff() == load.maxCoeff()) {
    throw Error(ErrorCode::DegenerateLoad, "system load is constant; trigger hours would be arbitrary");
  }
  const Eigen::Index count = std::min(trigger_hour_count(trigger_fraction, total), total);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto ranks_higher = [&](Eigen::Index a, Eigen::Index b) {
    if (load[a] != load[b]) return load[a] > load[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + count, order.end(), ranks_higher);

  PeakHourSet set;
  set.source = PeakHourSource::Trigger;
  set.trigger_fraction = trigger_fraction;
  set.hours.assign(order.begin(), order.begin() + count);
  std::sort(set.hours.begin(), set.hours.end());
  return set;
}

PeakHourSet tou_hour_set(int year, const TouWindow& window, Eigen::Index total_hours) {
  if (total_hours != static_cast<Eigen::Index>(days_in_year(year)) * 24) {
    throw Error(ErrorCode::LengthMismatch, "TOU schedule needs a full calendar year of " +
                                               std::to_string(days_in_year(year) * 24) + " hours, got " +
                                               std::to_string(total_hours));
  }
  PeakHourSet set;
  set.source = PeakHourSource::TouSchedule;
  for (Eigen::Index t = 0; t < total_hours; ++t) {
    const auto stamp = hour_stamp(year, static_cast<long>(t));
    if (window.months.contains(stamp.month) && stamp.hour_of_day >= window.start_hour &&
        stamp.hour_of_day < window.end_hour_exclusive) {
      set.hours.push_back(t);
    }
  }
  return set;
}

Classification classify_category(const CategoryRecord& rec, const DesignSpec& spec,
                                 const PeakHourSet* peak_hours) {
  validate(spec);
  if (spec.uses_peak_hours() && peak_hours == nullptr) {
    throw Error(ErrorCode::MissingPeakHours,
                std::string(design_kind_name(spec.kind)) + " requires a peak-hour set");
  }
  if (!spec.uses_peak_hours() && peak_hours != nullptr) {
    throw Error(ErrorCode::InvalidDesign,
                std::string(design_kind_name(spec.kind)) + " does not use a peak-hour set");
  }

  const Eigen::ArrayXd q = rec.hourly_kwh.array();
  Eigen::ArrayXd is_peak;
  switch (spec.kind) {
    case DesignKind::Flat:
      is_peak = Eigen::ArrayXd::Zero(q.size());
      break;
    case DesignKind::IPP:
      is_peak = (q >= *spec.threshold_kwh).cast<double>();
      break;
    case DesignKind::TOU:
    case DesignKind::DCPP:
      is_peak = peak_hours->mask(q.size());
      break;
    case DesignKind::DCIPP:
      is_peak = peak_hours->mask(q.size()) * (q >= *spec.threshold_kwh).cast<double>();
      break;
  }

  Classification c;
  c.key = rec.key;
  c.q_peak_year = (q * is_peak).sum();
  c.q_base_year = (q * (1.0 - is_peak)).sum();
  return c;
}

std::optional<PeakHourSet> peak_hours_for(const Dataset& d, const DesignSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case DesignKind::TOU:
      return tou_hour_set(d.year(), *spec.tou_window, d.hours());
    case DesignKind::DCPP:
    case DesignKind::DCIPP:
      return peak_hour_set(d.system_load(), *spec.trigger_fraction);
    default:
      return std::nullopt;
  }
}

std::map<CategoryKey, Classification> classify_all(const Dataset& d, const DesignSpec& spec) {
  const auto peak_hours = peak_hours_for(d, spec);
  const PeakHourSet* hours = peak_hours ? &*peak_hours : nullptr;
  std::map<CategoryKey, Classification> out;
  for (const auto& rec : d.categories()) out.emplace(rec.key, classify_category(rec, spec, hours));
  return out;
}

}  // namespace gridtariff
