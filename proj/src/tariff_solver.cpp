#include "gridtariff/tariff_solver.hpp"

#include <cmath>

#include "gridtariff/error.hpp"

namespace gridtariff {
namespace {

// Relative size below which the target's disagreement with gt_base * Q_total
// is summation-order rounding rather than a genuinely different flat rate.
constexpr double kTargetConsistencyTol = 1e-12;

void require_same_keys(const Classifications& classes, const HouseholdCounts& counts) {
  if (classes.size() != counts.size()) {
    throw Error(ErrorCode::SchemaViolation, "classifications and household counts cover different categories");
  }
  auto c = counts.begin();
  for (const auto& [key, _] : classes) {
    if (c->first != key) {
      throw Error(ErrorCode::SchemaViolation, "no household count for " + key.label());
    }
    ++c;
  }
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.gt_base > 0.0) || !std::isfinite(cfg.gt_base)) {
    throw Error(ErrorCode::InvalidConfig, "gt_base must be a positive rate");
  }
  if (!(cfg.f_recov > 0.0 && cfg.f_recov <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "f_recov must lie in (0, 1]");
  }
}

RevenueTarget revenue_target(const Dataset& d, double gt_flat) {
  if (!(gt_flat > 0.0) || !std::isfinite(gt_flat)) {
    throw Error(ErrorCode::InvalidConfig, "flat rate must be positive");
  }
  const double total = total_consumption(d).grand_total_kwh;
  if (total <= 0.0) throw Error(ErrorCode::ZeroConsumption, "dataset has zero total consumption");
  return {gt_flat * total};
}

AggregateSplit aggregate_split(const Classifications& classes, const HouseholdCounts& counts) {
  require_same_keys(classes, counts);
  AggregateSplit split;
  auto c = counts.begin();
  for (const auto& [key, cls] : classes) {
    const auto n = static_cast<double>((c++)->second);
    split.q_peak += n * cls.q_peak_year;
    split.q_base += n * cls.q_base_year;
  }
  return split;
}

TariffRates solve_peak_tariff(const Classifications& classes, const HouseholdCounts& counts,
                              const SolverConfig& cfg, const RevenueTarget& target) {
  validate(cfg);
  if (!(target.r_so > 0.0)) throw Error(ErrorCode::ZeroConsumption, "revenue target must be positive");
  const auto split = aggregate_split(classes, counts);
  const double total = split.q_peak + split.q_base;
  if (total <= 0.0) throw Error(ErrorCode::ZeroConsumption, "no consumption to bill");

  // peak_rate = (r_so - f*gt*Q_base) / Q_peak, written as gt plus the excess
  // the peak bucket must carry so that f == 1 yields gt exactly.
  double residual = target.r_so - cfg.gt_base * total;
  if (std::abs(residual) <= kTargetConsistencyTol * target.r_so) residual = 0.0;
  const double withheld = (1.0 - cfg.f_recov) * cfg.gt_base * split.q_base;

  TariffRates rates;
  rates.base_rate = cfg.gt_base * cfg.f_recov;
  if (split.q_peak <= 0.0) {
    if (residual != 0.0 || withheld != 0.0) {
      throw Error(ErrorCode::InfeasiblePeakRecovery,
                  "design has no peak consumption to recover the withheld base revenue");
    }
    rates.peak_rate = cfg.gt_base;
    return rates;
  }
  rates.peak_rate = cfg.gt_base + (residual + withheld) / split.q_peak;
  if (!std::isfinite(rates.peak_rate)) {
    throw Error(ErrorCode::InfeasiblePeakRecovery, "peak rate is not finite");
  }
  return rates;
}

// Same value as q_peak * peak + q_base * base, arranged so that equal rates
// reproduce the flat bill bit-for-bit.
double annual_bill(const Classification& c, const TariffRates& rates) {
  return (c.q_peak_year + c.q_base_year) * rates.base_rate + c.q_peak_year * (rates.peak_rate - rates.base_rate);
}

std::vector<RedistributionRow> redistribution(const Classifications& classes, const HouseholdCounts& counts,
                                              const TariffRates& rates, double gt_flat) {
  require_same_keys(classes, counts);
  std::vector<RedistributionRow> rows;
  rows.reserve(classes.size());
  for (const auto& [key, cls] : classes) {
    RedistributionRow row;
    row.key = key;
    row.bill_flat = (cls.q_peak_year + cls.q_base_year) * gt_flat;
    row.bill_design = annual_bill(cls, rates);
    row.delta = row.bill_design - row.bill_flat;
    if (row.bill_flat == 0.0) {
      row.zero_flat_bill = true;
      row.relative_change = 0.0;
    } else {
      row.relative_change = row.bill_design / row.bill_flat - 1.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gridtariff
