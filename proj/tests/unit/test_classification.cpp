#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "gridtariff/calendar.hpp"
#include "gridtariff/classification.hpp"
#include "gridtariff/error.hpp"

using namespace gridtariff;

namespace {

std::vector<Eigen::Index> hours_of(const PeakHourSet& s) { return s.hours; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("load-duration curve") {
  CHECK(load_duration_curve(fixture::load(fixture::series({10, 40, 20, 30}))).sorted_load ==
        fixture::series({40, 30, 20, 10}));
  const auto sorted = fixture::series({40, 30, 20, 10});
  CHECK(load_duration_curve(fixture::load(sorted)).sorted_load == sorted);
}

TEST_CASE("load-duration curve equals a naive re-sort of the synthetic load") {
  const auto& load = fixture::synthetic().system_load().hourly_load;
  std::vector<double> naive(load.data(), load.data() + load.size());
  // insertion into a descending list, no library sort
  std::vector<double> out;
  out.reserve(naive.size());
  for (double v : naive) {
    auto pos = out.begin();
    while (pos != out.end() && *pos >= v) ++pos;
    out.insert(pos, v);
  }
  const auto ldc = load_duration_curve(fixture::synthetic().system_load()).sorted_load;
  REQUIRE(static_cast<std::size_t>(ldc.size()) == out.size());
  bool same = true;
  for (std::size_t i = 0; i < out.size(); ++i) same = same && ldc[static_cast<Eigen::Index>(i)] == out[i];
  CHECK(same);
}

TEST_CASE("trigger hour count rounds half up") {
  CHECK(trigger_hour_count(0.01, 8760) == 88);
  CHECK(trigger_hour_count(0.25, 4) == 1);
  CHECK(trigger_hour_count(0.125, 4) == 1);
  CHECK(trigger_hour_count(0.1, 4) == 0);
  CHECK(trigger_hour_count(1.0, 8760) == 8760);
}

TEST_CASE("peak hour sets") {
  const auto toy = fixture::load(fixture::series({10, 40, 20, 30}));
  CHECK(hours_of(peak_hour_set(toy, 0.25)) == std::vector<Eigen::Index>{1});
  CHECK(hours_of(peak_hour_set(toy, 1.0)) == std::vector<Eigen::Index>{0, 1, 2, 3});
  CHECK(hours_of(peak_hour_set(toy, 0.5)) == std::vector<Eigen::Index>{1, 3});
  const auto tied = fixture::load(fixture::series({30, 40, 30, 30}));
  CHECK(hours_of(peak_hour_set(tied, 0.5)) == std::vector<Eigen::Index>{0, 1});
  CHECK(hours_of(peak_hour_set(tied, 0.75)) == std::vector<Eigen::Index>{0, 1, 2});
  CHECK(code_of([] { peak_hour_set(fixture::load(fixture::series({5, 5, 5})), 0.5); }) ==
        ErrorCode::DegenerateLoad);
  CHECK_THROWS_AS(peak_hour_set(toy, 0.0), Error);
  CHECK_THROWS_AS(peak_hour_set(toy, 1.5), Error);
}

TEST_CASE("trigger selection is scale invariant and nested in p") {
  const auto& sl = fixture::synthetic().system_load();
  for (double p : {0.01, 0.05, 0.2}) {
    const auto a = peak_hour_set(sl, p);
    const auto b = peak_hour_set(SystemLoad{sl.hourly_load * 3.7}, p);
    CHECK(a.hours == b.hours);
  }
  const auto small = peak_hour_set(sl, 0.05);
  const auto large = peak_hour_set(sl, 0.2);
  CHECK(std::includes(large.hours.begin(), large.hours.end(), small.hours.begin(), small.hours.end()));
}

TEST_CASE("TOU schedule") {
  const auto set = tou_hour_set(2017, TouWindow{}, 8760);
  CHECK(set.contains(18));
  CHECK_FALSE(set.contains(16));
  CHECK_FALSE(set.contains(20));
  const Eigen::Index jul1 = 181 * 24;
  CHECK(hour_stamp(2017, jul1 + 18).month == 7);
  CHECK(hour_stamp(2017, jul1 + 18).day_of_month == 1);
  CHECK_FALSE(set.contains(jul1 + 18));
  // Oct..Mar of 2017: 31+28+31 + 31+30+31 = 182 days, 3 hours each
  CHECK(set.hours.size() == 546);
  CHECK(tou_hour_set(2020, TouWindow{}, 8784).hours.size() == 549);
  CHECK(code_of([] { tou_hour_set(2017, TouWindow{}, 4); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("classification examples on the toy") {
  const Dataset d = fixture::toy();
  const auto& rec = d.categories().front();

  auto c = classify_category(rec, DesignSpec::ipp(1.0), nullptr);
  CHECK(c.q_peak_year == 5.0);
  CHECK(c.q_base_year == 1.0);

  c = classify_category(rec, DesignSpec::ipp(2.0), nullptr);
  CHECK(c.q_peak_year == 5.0);  // 2.0 >= 2.0 counts as peak

  const auto flat_profile = fixture::record("Ap_P1_A1_€1_EV0_HP0", HourlySeries::Constant(4, 0.5));
  c = classify_category(flat_profile, DesignSpec::ipp(1.0), nullptr);
  CHECK(c.q_peak_year == 0.0);
  CHECK(c.q_base_year == 2.0);

  const auto trig = peak_hour_set(d.system_load(), 0.25);
  c = classify_category(rec, DesignSpec::dcipp(1.0, 0.25), &trig);
  CHECK(c.q_peak_year == 2.0);
  CHECK(c.q_base_year == 4.0);
  c = classify_category(rec, DesignSpec::dcipp(2.5, 0.25), &trig);
  CHECK(c.q_peak_year == 0.0);
  CHECK(c.q_base_year == 6.0);

  c = classify_category(rec, DesignSpec::dcpp(0.25), &trig);
  CHECK(c.q_peak_year == 2.0);

  CHECK(code_of([&] { classify_category(rec, DesignSpec::dcpp(0.25), nullptr); }) == ErrorCode::MissingPeakHours);
  CHECK(code_of([&] { classify_category(rec, DesignSpec::ipp(1.0), &trig); }) == ErrorCode::InvalidDesign);
}

TEST_CASE("classify_all composes per-category calls") {
  const Dataset d(2017,
                  {fixture::record("Ap_P1_A1_€1_EV0_HP0", fixture::series({0.5, 2, 0.5, 3}), 3),
                   fixture::record("H_P3_A2_€2_EV1_HP0", fixture::series({4, 1, 0.2, 2.5}), 2)},
                  fixture::load(fixture::series({10, 40, 20, 30})));
  const auto flat = classify_all(d, DesignSpec::flat());
  for (const auto& [k, c] : flat) CHECK(c.q_peak_year == 0.0);

  const auto all = classify_all(d, DesignSpec::dcpp(0.25));
  const auto trig = peak_hour_set(d.system_load(), 0.25);
  for (const auto& rec : d.categories()) {
    const auto one = classify_category(rec, DesignSpec::dcpp(0.25), &trig);
    CHECK(all.at(rec.key).q_peak_year == one.q_peak_year);
    CHECK(all.at(rec.key).q_base_year == one.q_base_year);
  }
  CHECK_FALSE(peak_hours_for(d, DesignSpec::ipp(1)).has_value());
  CHECK(peak_hours_for(d, DesignSpec::dcipp(1, 0.5))->hours.size() == 2);
}

TEST_CASE("design validation") {
  CHECK(code_of([] { validate(DesignSpec{DesignKind::IPP, std::nullopt, std::nullopt, std::nullopt}); }) ==
        ErrorCode::MissingThreshold);
  CHECK(code_of([] { validate(DesignSpec::ipp(-1.0)); }) == ErrorCode::InvalidDesign);
  CHECK(code_of([] { validate(DesignSpec::dcpp(0.0)); }) == ErrorCode::InvalidDesign);
  CHECK(code_of([] { validate(DesignSpec{DesignKind::DCPP, std::nullopt, std::nullopt, std::nullopt}); }) ==
        ErrorCode::InvalidDesign);
  TouWindow bad;
  bad.start_hour = 20;
  bad.end_hour_exclusive = 17;
  CHECK(code_of([&] { validate(DesignSpec::tou(bad)); }) == ErrorCode::InvalidDesign);
  CHECK(parse_design_kind("DcIpP") == DesignKind::DCIPP);
  CHECK_FALSE(parse_design_kind("cpp").has_value());
}

TEST_CASE("partition, nesting and monotonicity on the synthetic fixture") {
  const Dataset& d = fixture::synthetic();
  const std::vector<double> thresholds = {0.5, 1.0, 1.5, 2.0, 3.0};
  const std::vector<double> triggers = {0.01, 0.05, 0.2, 0.4};
  std::map<double, std::map<CategoryKey, Classification>> ipp, dcpp;
  for (double th : thresholds) ipp[th] = classify_all(d, DesignSpec::ipp(th));
  for (double p : triggers) dcpp[p] = classify_all(d, DesignSpec::dcpp(p));
  const auto totals = total_consumption(d).per_household_kwh;

  auto partition_ok = [&](const std::map<CategoryKey, Classification>& m) {
    for (const auto& [k, c] : m) {
      if (fixture::rel_err(c.q_peak_year + c.q_base_year, totals.at(k)) > 1e-9) return false;
    }
    return true;
  };
  for (const auto& [th, m] : ipp) CHECK(partition_ok(m));
  for (const auto& [p, m] : dcpp) CHECK(partition_ok(m));
  CHECK(partition_ok(classify_all(d, DesignSpec::tou())));

  for (const auto& rec : d.categories()) {
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
      CHECK(ipp[thresholds[i - 1]].at(rec.key).q_peak_year >= ipp[thresholds[i]].at(rec.key).q_peak_year);
    }
    for (std::size_t i = 1; i < triggers.size(); ++i) {
      CHECK(dcpp[triggers[i - 1]].at(rec.key).q_peak_year <= dcpp[triggers[i]].at(rec.key).q_peak_year);
    }
  }

  for (double th : thresholds) {
    for (double p : triggers) {
      const auto both = classify_all(d, DesignSpec::dcipp(th, p));
      CHECK(partition_ok(both));
      for (const auto& [k, c] : both) {
        CHECK(c.q_peak_year <= ipp[th].at(k).q_peak_year);
        CHECK(c.q_peak_year <= dcpp[p].at(k).q_peak_year);
      }
    }
  }
}

TEST_CASE("randomised hour-by-hour cross-check") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index T = 24;
    HourlySeries kwh(T), load(T);
    for (Eigen::Index t = 0; t < T; ++t) {
      kwh[t] = std::round(u(rng) * 4.0) / 4.0;
      load[t] = std::round(u(rng) * 3.0);
    }
    if (load.minCoeff() == load.maxCoeff()) continue;
    const auto rec = fixture::record("Ap_P1_A1_€1_EV0_HP0", kwh);
    const double th = 0.25 + std::round(u(rng) * 4.0) / 4.0;
    const double p = 0.05 + 0.9 * u(rng) / 4.0;
    const auto trig = peak_hour_set(SystemLoad{load}, p);
    const auto c = classify_category(rec, DesignSpec::dcipp(th, p), &trig);
    double peak = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
      if (trig.contains(t) && kwh[t] >= th) peak += kwh[t];
    }
    CHECK(c.q_peak_year == doctest::Approx(peak).epsilon(1e-12));
  }
}
