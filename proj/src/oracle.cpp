#include "gridtariff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gridtariff::oracle {
namespace {

bool leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int month_of_day(int year, long day_index) {
  const int lengths[12] = {31, leap(year) ? 29 : 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  long remaining = day_index;
  for (int m = 0; m < 12; ++m) {
    if (remaining < lengths[m]) return m + 1;
    remaining -= lengths[m];
  }
  return 12;
}

bool in_tou(int year, long t, const TouWindow& w) {
  const int month = month_of_day(year, t / 24);
  const long hour = t % 24;
  bool month_ok = false;
  for (unsigned m : w.months) month_ok = month_ok || static_cast<int>(m) == month;
  return month_ok && hour >= w.start_hour && hour < w.end_hour_exclusive;
}

std::vector<bool> trigger_hours(const std::vector<double>& load, double fraction) {
  const long total = static_cast<long>(load.size());
  long count = std::lround(fraction * static_cast<double>(total));
  count = std::min(count, total);
  std::vector<bool> chosen(load.size(), false);
  for (long k = 0; k < count; ++k) {
    long best = -1;
    for (long t = 0; t < total; ++t) {
      if (chosen[static_cast<std::size_t>(t)]) continue;
      if (best < 0 || load[static_cast<std::size_t>(t)] > load[static_cast<std::size_t>(best)]) best = t;
    }
    chosen[static_cast<std::size_t>(best)] = true;
  }
  return chosen;
}

bool close(double a, double b, double tol, double scale) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace

NaiveInstance from_dataset(const Dataset& d) {
  NaiveInstance inst;
  inst.year = d.year();
  for (const auto& rec : d.categories()) {
    NaiveCategory c;
    c.label = rec.key.label();
    c.households = static_cast<double>(rec.n_households);
    c.kwh.assign(rec.hourly_kwh.data(), rec.hourly_kwh.data() + rec.hourly_kwh.size());
    inst.categories.push_back(std::move(c));
  }
  std::sort(inst.categories.begin(), inst.categories.end(),
            [](const NaiveCategory& a, const NaiveCategory& b) { return a.label < b.label; });
  const auto& load = d.system_load().hourly_load;
  inst.system_load.assign(load.data(), load.data() + load.size());
  return inst;
}

OracleResult evaluate(const NaiveInstance& inst, const ScenarioSpec& s) {
  const auto& design = s.design;
  std::vector<bool> trigger;
  if (design.kind == DesignKind::DCPP || design.kind == DesignKind::DCIPP) {
    trigger = trigger_hours(inst.system_load, *design.trigger_fraction);
  }

  const double f = design.kind == DesignKind::Flat ? 1.0 : s.solver.f_recov;
  OracleResult out;
  out.base_rate = s.solver.gt_base * f;

  std::vector<double> peak(inst.categories.size(), 0.0);
  std::vector<double> base(inst.categories.size(), 0.0);
  double r_so = 0.0;
  for (std::size_t g = 0; g < inst.categories.size(); ++g) {
    const auto& cat = inst.categories[g];
    for (std::size_t t = 0; t < cat.kwh.size(); ++t) {
      const double q = cat.kwh[t];
      bool is_peak = false;
      switch (design.kind) {
        case DesignKind::Flat: is_peak = false; break;
        case DesignKind::IPP: is_peak = q >= *design.threshold_kwh; break;
        case DesignKind::TOU: is_peak = in_tou(inst.year, static_cast<long>(t), *design.tou_window); break;
        case DesignKind::DCPP: is_peak = trigger[t]; break;
        case DesignKind::DCIPP: is_peak = trigger[t] && q >= *design.threshold_kwh; break;
      }
      if (is_peak) {
        peak[g] += q;
      } else {
        base[g] += q;
      }
      r_so += cat.households * q * s.gt_flat;
    }
  }

  auto revenue = [&](double peak_rate) {
    double total = 0.0;
    for (std::size_t g = 0; g < inst.categories.size(); ++g) {
      total += inst.categories[g].households * (peak[g] * peak_rate + base[g] * out.base_rate);
    }
    return total;
  };

  double q_peak = 0.0;
  for (std::size_t g = 0; g < inst.categories.size(); ++g) q_peak += inst.categories[g].households * peak[g];

  if (r_so <= 0.0) {
    out.feasible = false;
    return out;
  }
  if (q_peak == 0.0) {
    if (std::abs(revenue(0.0) - r_so) > 1e-9 * r_so) {
      out.feasible = false;
      return out;
    }
    out.peak_rate = s.solver.gt_base;
  } else {
    double lo = 0.0;
    double hi = std::max(1.0, s.solver.gt_base);
    while (revenue(hi) < r_so) hi *= 2.0;
    while (revenue(lo) > r_so) lo = 2.0 * lo - 1.0;
    for (int i = 0; i < 2000; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (revenue(mid) < r_so) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.peak_rate = 0.5 * (lo + hi);
  }

  for (std::size_t g = 0; g < inst.categories.size(); ++g) {
    OracleCategory c;
    c.label = inst.categories[g].label;
    c.bill_flat = (peak[g] + base[g]) * s.gt_flat;
    c.bill_design = peak[g] * out.peak_rate + base[g] * out.base_rate;
    c.delta = c.bill_design - c.bill_flat;
    out.categories.push_back(c);
  }
  return out;
}

Comparison compare(const Dataset& d, const ScenarioSpec& s, double rel_tol) {
  const OracleResult ref = evaluate(from_dataset(d), s);
  Comparison cmp;
  std::ostringstream why;
  ScenarioResult got;
  try {
    got = run_scenario(d, s);
  } catch (const Error& e) {
    const bool infeasible =
        e.code() == ErrorCode::InfeasiblePeakRecovery || e.code() == ErrorCode::ZeroConsumption;
    cmp.match = infeasible && !ref.feasible;
    if (!cmp.match) cmp.detail = s.name + ": engine failed (" + e.what() + ") but oracle solved it";
    return cmp;
  }
  if (!ref.feasible) {
    cmp.match = false;
    cmp.detail = s.name + ": engine solved an instance the oracle finds infeasible";
    return cmp;
  }
  if (!close(got.rates.base_rate, ref.base_rate, rel_tol, 0.0)) {
    why << s.name << ": base rate " << got.rates.base_rate << " vs " << ref.base_rate << "; ";
  }
  if (!close(got.rates.peak_rate, ref.peak_rate, rel_tol, 0.0)) {
    why << s.name << ": peak rate " << got.rates.peak_rate << " vs " << ref.peak_rate << "; ";
  }
  if (got.rows.size() != ref.categories.size()) {
    why << s.name << ": category count differs; ";
  } else {
    for (std::size_t i = 0; i < got.rows.size(); ++i) {
      const auto& a = got.rows[i];
      const auto& b = ref.categories[i];
      if (a.key.label() != b.label) {
        why << s.name << ": category order differs; ";
        break;
      }
      if (!close(a.bill_flat, b.bill_flat, rel_tol, 0.0) || !close(a.bill_design, b.bill_design, rel_tol, 0.0) ||
          !close(a.delta, b.delta, rel_tol, b.bill_flat)) {
        why << s.name << " " << b.label << ": bill " << a.bill_design << " vs " << b.bill_design << ", delta "
            << a.delta << " vs " << b.delta << "; ";
      }
    }
  }
  cmp.detail = why.str();
  cmp.match = cmp.detail.empty();
  return cmp;
}

std::vector<ScenarioSpec> check_grid(const Dataset& d, double gt_base) {
  std::set<double> values;
  for (const auto& rec : d.categories()) {
    for (Eigen::Index t = 0; t < rec.hourly_kwh.size(); ++t) {
      if (rec.hourly_kwh[t] > 0.0) values.insert(rec.hourly_kwh[t]);
    }
  }
  std::vector<double> thresholds;
  if (!values.empty()) {
    const std::vector<double> sorted(values.begin(), values.end());
    const std::size_t picks = std::min<std::size_t>(sorted.size(), 8);
    for (std::size_t i = 0; i < picks; ++i) {
      thresholds.push_back(sorted[picks == 1 ? 0 : i * (sorted.size() - 1) / (picks - 1)]);
    }
    thresholds.push_back(sorted.back() * 2.0);
  }
  const double hours = static_cast<double>(d.hours());
  std::vector<double> triggers = {1.0 / hours, 0.05, 0.25, 0.5, 1.0};
  std::sort(triggers.begin(), triggers.end());
  triggers.erase(std::unique(triggers.begin(), triggers.end()), triggers.end());

  std::vector<DesignSpec> designs = {DesignSpec::flat()};
  if (d.hours() == static_cast<Eigen::Index>(hours_in_year(d.year()))) designs.push_back(DesignSpec::tou());
  for (double th : thresholds) designs.push_back(DesignSpec::ipp(th));
  for (double p : triggers) designs.push_back(DesignSpec::dcpp(p));
  for (double th : thresholds) {
    for (double p : triggers) designs.push_back(DesignSpec::dcipp(th, p));
  }

  std::vector<ScenarioSpec> specs;
  std::set<std::string> names;
  for (const auto& design : designs) {
    for (double f : {1.0, 0.95, 0.8, 0.5}) {
      ScenarioSpec s;
      s.design = design;
      s.solver = {gt_base, f};
      s.gt_flat = gt_base;
      s.name = scenario_name(design) + ";f=" + std::to_string(f);
      if (names.insert(s.name).second) specs.push_back(std::move(s));
    }
  }
  return specs;
}

}  // namespace gridtariff::oracle
