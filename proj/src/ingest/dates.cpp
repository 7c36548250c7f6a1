#include "climact/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace climact {

using namespace std::chrono;

Date parse_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
    throw std::invalid_argument("bad date '" + s + "', expected YYYY-MM-DD");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok())
    throw std::invalid_argument("bad date '" + s + "'");
  return sys_days{ymd};
}

std::string format_date(Date d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

Date week_start(Date d) {
  const weekday wd{d};
  return d - days{wd.iso_encoding() - 1};
}

IsoWeek iso_week_of(Date d) {
  // The Thursday of d's week fixes both the ISO year and the week
  // number.
  const Date thursday = week_start(d) + days{3};
  const year_month_day ymd{thursday};
  const Date jan1 = sys_days{ymd.year() / January / 1};
  const int doy = static_cast<int>((thursday - jan1).count());
  return {int(ymd.year()), doy / 7 + 1};
}

Date monday_of(IsoWeek w) {
  // January 4 is always inside week 1.
  const Date jan4 = sys_days{year{w.year} / January / 4};
  return week_start(jan4) + days{7 * (w.week - 1)};
}

int weeks_in_iso_year(int y) {
  // December 28 is always inside the last week of its ISO year.
  return iso_week_of(sys_days{year{y} / December / 28}).week;
}

IsoWeek next_week(IsoWeek w) {
  if (w.week < weeks_in_iso_year(w.year)) return {w.year, w.week + 1};
  return {w.year + 1, 1};
}

IsoWeek parse_iso_week(const std::string& s) {
  int y = 0, w = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-W%d%c", &y, &w, &tail) != 2)
    throw std::invalid_argument("bad ISO week '" + s +
                                "', expected YYYY-Www");
  if (w < 1 || w > weeks_in_iso_year(y))
    throw std::invalid_argument("bad ISO week '" + s + "'");
  return {y, w};
}

std::string format_iso_week(IsoWeek w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
  return buf;
}

}  // namespace climact
