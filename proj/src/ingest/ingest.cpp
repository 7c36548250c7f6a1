#include "climact/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "climact/csv.hpp"

namespace climact {

using std::chrono::days;

std::vector<double> zscore(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("zscore: need at least 2 values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0))
    throw std::invalid_argument("zscore: zero variance (constant input)");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = (values[i] - mean) / sd;
  return out;
}

TemporalWindows split_windows(Date t_a, bool gap_enabled) {
  TemporalWindows w;
  w.t_a = t_a;
  w.t0 = t_a - days{52 * 7};
  w.long_begin = w.t0;
  w.long_end = gap_enabled ? t_a - days{5 * 7} : t_a - days{7};
  w.short_begin = t_a - days{7};
  w.short_end = t_a;
  w.gap_enabled = gap_enabled;
  return w;
}

std::optional<std::string> georeference(
    std::span<const std::string> user_location_subreddits,
    const std::map<std::string, std::string>& location_map) {
  std::optional<std::string> area;
  for (const std::string& sub : user_location_subreddits) {
    const auto it = location_map.find(sub);
    if (it == location_map.end()) continue;  // not location-based
    if (!area) {
      area = it->second;
    } else if (*area != it->second) {
      return std::nullopt;  // conflicting areas
    }
  }
  return area;
}

void MediaSeries::set(const std::string& area, IsoWeek week,
                      std::size_t theme, double attention) {
  if (theme >= 3) throw std::invalid_argument("media: bad theme index");
  auto& row = areas_[area][monday_of(week)];
  auto& seen = theme_seen_[area + "\n" + format_iso_week(week)];
  if (seen.empty()) seen.assign(3, false);
  if (seen[theme])
    throw std::invalid_argument("media: duplicate entry for area '" + area +
                                "', week " + format_iso_week(week) +
                                ", theme " + kThemeNames[theme]);
  seen[theme] = true;
  row[theme] = attention;
}

void MediaSeries::validate() const {
  if (areas_.empty()) throw std::invalid_argument("media: empty series");
  for (const auto& [area, weeks] : areas_) {
    if (weeks.empty())
      throw std::invalid_argument("media: area '" + area + "' has no weeks");
    Date expect = weeks.begin()->first;
    for (const auto& [monday, values] : weeks) {
      if (monday != expect)
        throw std::invalid_argument(
            "media: weeks not contiguous for area '" + area + "' around " +
            format_iso_week(iso_week_of(monday)));
      expect = monday + days{7};
      for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
          throw std::invalid_argument(
              "media: attention outside [0,1] for area '" + area + "', week " +
              format_iso_week(iso_week_of(monday)));
    }
  }
  for (const auto& [key, seen] : theme_seen_)
    for (std::size_t t = 0; t < 3; ++t)
      if (!seen[t]) {
        const std::size_t nl = key.find('\n');
        throw std::invalid_argument("media: missing theme '" +
                                    std::string(kThemeNames[t]) +
                                    "' for area '" + key.substr(0, nl) +
                                    "', week " + key.substr(nl + 1));
      }
}

std::vector<std::string> MediaSeries::area_names() const {
  std::vector<std::string> names;
  names.reserve(areas_.size());
  for (const auto& [area, weeks] : areas_) names.push_back(area);
  return names;
}

bool MediaSeries::has_area(const std::string& area) const {
  return areas_.count(area) != 0;
}

Vec3 MediaSeries::at(const std::string& area, Date day) const {
  const auto ait = areas_.find(area);
  if (ait == areas_.end())
    throw std::invalid_argument("media: unknown area '" + area + "'");
  const Date monday = week_start(day);
  const auto wit = ait->second.find(monday);
  if (wit == ait->second.end())
    throw std::invalid_argument("media: area '" + area +
                                "' does not cover week " +
                                format_iso_week(iso_week_of(day)));
  return wit->second;
}

Vec3 MediaSeries::median_across_areas(Date day) const {
  const Date monday = week_start(day);
  std::array<std::vector<double>, 3> values;
  for (const auto& [area, weeks] : areas_) {
    const auto wit = weeks.find(monday);
    if (wit == weeks.end())
      throw std::invalid_argument("media: area '" + area +
                                  "' does not cover week " +
                                  format_iso_week(iso_week_of(day)));
    for (std::size_t t = 0; t < 3; ++t) values[t].push_back(wit->second[t]);
  }
  Vec3 med{};
  for (std::size_t t = 0; t < 3; ++t) {
    std::vector<double>& v = values[t];
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    med[t] = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  }
  return med;
}

namespace {

Vec3 window_mean(const MediaSeries& series,
                 const std::optional<std::string>& area, Date begin,
                 Date end) {
  if (!(begin < end))
    throw std::invalid_argument("media: empty window");
  Vec3 sum{};
  std::size_t count = 0;
  for (Date d = begin; d < end; d += days{1}) {
    const Vec3 v = area ? series.at(*area, d) : series.median_across_areas(d);
    for (std::size_t t = 0; t < 3; ++t) sum[t] += v[t];
    ++count;
  }
  for (double& s : sum) s /= static_cast<double>(count);
  return sum;
}

}  // namespace

std::pair<Vec3, Vec3> media_features(const MediaSeries& series,
                                     const std::optional<std::string>& area,
                                     const TemporalWindows& windows) {
  if (area && !series.has_area(*area))
    throw std::invalid_argument("media: unknown area '" + *area + "'");
  return {window_mean(series, area, windows.long_begin, windows.long_end),
          window_mean(series, area, windows.short_begin, windows.short_end)};
}

SubredditCatalog load_catalog(const std::string& path) {
  const CsvTable t = read_csv(path);
  const int c_name = t.require_col("name");
  int c_axis[4];
  for (std::size_t a = 0; a < 4; ++a)
    c_axis[a] = t.require_col(kAxisNames[a]);
  const int c_pop = t.require_col("popularity_z");

  SubredditCatalog cat;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    cat.names.push_back(t.cell(r, c_name));
    Vec4 sc;
    for (std::size_t a = 0; a < 4; ++a) sc[a] = t.number(r, c_axis[a]);
    cat.scores.push_back(sc);
    cat.popularity.push_back(t.number(r, c_pop));
  }
  try {
    cat.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return cat;
}

MediaSeries load_media(const std::string& path) {
  const CsvTable t = read_csv(path);
  const int c_area = t.require_col("area");
  const int c_week = t.require_col("iso_week");
  const int c_theme = t.require_col("theme");
  const int c_att = t.require_col("attention");

  MediaSeries series;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& theme = t.cell(r, c_theme);
    int ti = -1;
    for (int i = 0; i < 3; ++i)
      if (theme == kThemeNames[i]) ti = i;
    if (ti < 0)
      throw std::invalid_argument(t.context(r) + ": unknown theme '" + theme +
                                  "'");
    IsoWeek week;
    try {
      week = parse_iso_week(t.cell(r, c_week));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(t.context(r) + ": " + e.what());
    }
    try {
      series.set(t.cell(r, c_area), week, static_cast<std::size_t>(ti),
                 t.number(r, c_att));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(t.context(r) + ": " + e.what());
    }
  }
  try {
    series.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return series;
}

namespace {

std::vector<std::uint8_t> parse_bitstring(const CsvTable& t, std::size_t row,
                                          int column, std::size_t k,
                                          const std::string& user_id) {
  const std::string& s = t.cell(row, column);
  if (s.size() != k)
    throw std::invalid_argument(
        t.context(row) + ": user '" + user_id + "': " + t.header[column] +
        " length " + std::to_string(s.size()) + " != catalog K = " +
        std::to_string(k));
  std::vector<std::uint8_t> bits(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (s[i] != '0' && s[i] != '1')
      throw std::invalid_argument(t.context(row) + ": user '" + user_id +
                                  "': " + t.header[column] +
                                  " must be a 0/1 string");
    bits[i] = s[i] == '1' ? 1 : 0;
  }
  return bits;
}

const std::array<std::string, 6> kMediaColumns = {
    "M_L_climate",  "M_L_climate_action",  "M_L_natural_disasters",
    "M_S_climate",  "M_S_climate_action",  "M_S_natural_disasters"};

}  // namespace

LoadedData load_dataset(const std::string& catalog_path,
                        const std::string& users_path,
                        const std::optional<std::string>& media_path,
                        const std::optional<std::string>& interactions_path,
                        const LoadOptions& options) {
  LoadedData out;
  out.data.catalog = load_catalog(catalog_path);
  const std::size_t k = out.data.catalog.size();

  const CsvTable t = read_csv(users_path);
  const int c_id = t.require_col("user_id");
  const int c_a = t.require_col("A");
  const int c_i = t.require_col("I");
  const int c_el = t.require_col("E_L");
  const int c_es = t.require_col("E_S");
  const int c_loc = t.col("location");
  const int c_pl = t.require_col("P_L");
  const int c_ps = t.require_col("P_S");

  int c_media[6];
  int n_media_cols = 0;
  for (std::size_t m = 0; m < 6; ++m) {
    c_media[m] = t.col(kMediaColumns[m]);
    if (c_media[m] >= 0) ++n_media_cols;
  }
  if (n_media_cols != 0 && n_media_cols != 6)
    throw std::invalid_argument(
        users_path + ": media override columns must be all present or all "
                     "absent (found " + std::to_string(n_media_cols) +
        " of 6)");
  const bool has_overrides = n_media_cols == 6;

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    UserObservation u;
    u.id = t.cell(r, c_id);
    if (u.id.empty())
      throw std::invalid_argument(t.context(r) + ": empty user_id");
    u.activated = static_cast<std::uint8_t>(t.bit(r, c_a));
    u.interacted = static_cast<std::uint8_t>(t.bit(r, c_i));
    u.e_long = t.number(r, c_el);
    u.e_short = t.number(r, c_es);
    if (c_loc >= 0 && !t.cell(r, c_loc).empty()) u.location = t.cell(r, c_loc);
    u.p_long = parse_bitstring(t, r, c_pl, k, u.id);
    u.p_short = parse_bitstring(t, r, c_ps, k, u.id);
    if (has_overrides) {
      for (std::size_t m = 0; m < 3; ++m) u.m_long[m] = t.number(r, c_media[m]);
      for (std::size_t m = 0; m < 3; ++m)
        u.m_short[m] = t.number(r, c_media[3 + m]);
    }
    out.data.users.push_back(std::move(u));
  }

  if (interactions_path) {
    const CsvTable it = read_csv(*interactions_path);
    const int ic_id = it.require_col("user_id");
    const int ic_i = it.require_col("I");
    std::map<std::string, int> bits;
    for (std::size_t r = 0; r < it.rows.size(); ++r)
      bits[it.cell(r, ic_id)] = it.bit(r, ic_i);
    for (UserObservation& u : out.data.users) {
      const auto found = bits.find(u.id);
      if (found != bits.end()) {
        u.interacted = static_cast<std::uint8_t>(found->second);
        bits.erase(found);
      }
    }
    if (!bits.empty())
      throw std::invalid_argument(*interactions_path + ": unknown user '" +
                                  bits.begin()->first + "'");
  }

  if (!has_overrides) {
    if (!media_path)
      throw std::invalid_argument(
          users_path +
          ": no media override columns and no media file was given");
    if (!options.t_a)
      throw std::invalid_argument(
          "load_dataset: computing media features requires t_a");
    out.media = load_media(*media_path);
    out.media_from_series = true;
    const TemporalWindows windows =
        split_windows(*options.t_a, options.gap_enabled);

    const std::size_t n = out.data.users.size();
    std::array<std::vector<double>, 6> raw;
    for (auto& v : raw) v.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      const auto [ml, ms] =
          media_features(*out.media, out.data.users[u].location, windows);
      for (std::size_t m = 0; m < 3; ++m) {
        raw[m][u] = ml[m];
        raw[3 + m][u] = ms[m];
      }
    }
    for (std::size_t m = 0; m < 6; ++m) {
      std::vector<double> z;
      try {
        z = zscore(raw[m]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("media feature column ") +
                                    kMediaColumns[m] + ": " + e.what());
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (m < 3)
          out.data.users[u].m_long[m] = z[u];
        else
          out.data.users[u].m_short[m - 3] = z[u];
      }
    }
  } else if (media_path) {
    out.media = load_media(*media_path);
  }

  out.data.validate();
  return out;
}

std::string catalog_to_csv(const SubredditCatalog& catalog) {
  std::ostringstream ss;
  ss << "name";
  for (const char* a : kAxisNames) ss << ',' << a;
  ss << ",popularity_z\n";
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    ss << catalog.names[i];
    for (double v : catalog.scores[i]) ss << ',' << format_double(v);
    ss << ',' << format_double(catalog.popularity[i]) << '\n';
  }
  return ss.str();
}

std::string users_to_csv(const Dataset& data) {
  std::ostringstream ss;
  ss << "user_id,A,I,E_L,E_S,location,P_L,P_S";
  for (const std::string& c : kMediaColumns) ss << ',' << c;
  ss << '\n';
  for (const UserObservation& u : data.users) {
    ss << u.id << ',' << int(u.activated) << ',' << int(u.interacted) << ','
       << format_double(u.e_long) << ',' << format_double(u.e_short) << ','
       << (u.location ? *u.location : "") << ',';
    for (std::uint8_t b : u.p_long) ss << (b ? '1' : '0');
    ss << ',';
    for (std::uint8_t b : u.p_short) ss << (b ? '1' : '0');
    for (double v : u.m_long) ss << ',' << format_double(v);
    for (double v : u.m_short) ss << ',' << format_double(v);
    ss << '\n';
  }
  return ss.str();
}

std::string latents_to_csv(const Dataset& data, const LatentState& latents) {
  std::ostringstream ss;
  ss << "user_id";
  for (const char* a : kAxisNames) ss << ",D_" << a;
  ss << ",S\n";
  for (std::size_t u = 0; u < data.users.size(); ++u) {
    ss << data.users[u].id;
    for (double v : latents.d[u]) ss << ',' << format_double(v);
    ss << ',' << format_double(latents.s[u]) << '\n';
  }
  return ss.str();
}

}  // namespace climact
