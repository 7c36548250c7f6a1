#pragma once

#include <chrono>
#include <string>

namespace climact {

using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed or
/// non-existent dates.
Date parse_date(const std::string& s);
std::string format_date(Date d);

/// ISO-8601 week, e.g. 2019-W39.
struct IsoWeek {
  int year = 0;
  int week = 0;

  auto operator<=>(const IsoWeek&) const = default;
};

IsoWeek iso_week_of(Date d);
/// Monday of the given ISO week.
Date monday_of(IsoWeek w);
/// Monday of the ISO week containing d.
Date week_start(Date d);
/// 52 or 53.
int weeks_in_iso_year(int year);
IsoWeek next_week(IsoWeek w);

/// Parses "YYYY-Www" (e.g. "2019-W07"). Throws std::invalid_argument.
IsoWeek parse_iso_week(const std::string& s);
std::string format_iso_week(IsoWeek w);

}  // namespace climact
