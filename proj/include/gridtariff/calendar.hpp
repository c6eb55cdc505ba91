#pragma once

namespace gridtariff {

struct HourStamp {
  unsigned month = 1;         // 1..12
  unsigned day_of_month = 1;  // 1..31
  int day_of_year = 0;        // 0-based
  int hour_of_day = 0;        // 0..23
};

// Local time of hour index `t` in `year`, counting from Jan 1 00:00 with a
// fixed offset (no daylight-saving shift).
HourStamp hour_stamp(int year, long t);

int days_in_year(int year);

}  // namespace gridtariff
