#include "gridtariff/calendar.hpp"

#include <chrono>

namespace gridtariff {

HourStamp hour_stamp(int year, long t) {
  using namespace std::chrono;
  const long day = t / 24;
  const sys_days date = sys_days{std::chrono::year{year} / January / 1} + days{day};
  const year_month_day ymd{date};
  HourStamp s;
  s.month = static_cast<unsigned>(ymd.month());
  s.day_of_month = static_cast<unsigned>(ymd.day());
  s.day_of_year = static_cast<int>(day);
  s.hour_of_day = static_cast<int>(t % 24);
  return s;
}

int days_in_year(int year) { return std::chrono::year{year}.is_leap() ? 366 : 365; }

}  // namespace gridtariff
