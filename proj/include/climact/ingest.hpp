#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "climact/dates.hpp"
#include "climact/types.hpp"

namespace climact {

/// z-scores with the sample (n-1) standard deviation. Throws
/// std::invalid_argument for length < 2 or zero variance.
std::vector<double> zscore(std::span<const double> values);

/// Study windows around the activation time t_A: the long-term period
/// covers the year before t_A and the short-term period the final week.
/// With the gap enabled the long-term period stops four weeks early.
/// Intervals are half-open in days: [begin, end).
struct TemporalWindows {
  Date t_a;
  Date t0;
  Date long_begin;
  Date long_end;
  Date short_begin;
  Date short_end;
  bool gap_enabled = true;
};

TemporalWindows split_windows(Date t_a, bool gap_enabled);

/// Area of a user given the location subreddits they wrote in: the
/// single area all of them map to, or nothing on conflict or when the
/// list is empty. Subreddits absent from the map are not
/// location-based and are ignored.
std::optional<std::string> georeference(
    std::span<const std::string> user_location_subreddits,
    const std::map<std::string, std::string>& location_map);

/// Weekly media attention per (area, ISO week, theme), each a fraction
/// of news in [0, 1].
class MediaSeries {
 public:
  /// Weeks must be contiguous per area once assembled; validate()
  /// checks that, the [0, 1] range, and theme completeness.
  void set(const std::string& area, IsoWeek week, std::size_t theme,
           double attention);
  void validate() const;

  bool empty() const { return areas_.empty(); }
  std::vector<std::string> area_names() const;
  bool has_area(const std::string& area) const;

  /// Attention vector of an area for the week containing `day`.
  /// Throws std::invalid_argument if not covered.
  Vec3 at(const std::string& area, Date day) const;
  /// Per-theme median across all areas for the week containing `day`.
  Vec3 median_across_areas(Date day) const;

 private:
  // area -> week start (Monday) -> per-theme attention
  std::map<std::string, std::map<Date, Vec3>> areas_;
  std::map<std::string, std::vector<bool>> theme_seen_;
};

/// Raw (pre-standardization) media features of one user: per theme,
/// the day-weighted mean of weekly attention over each window, using
/// the user's area or the cross-area weekly median when unlocated.
std::pair<Vec3, Vec3> media_features(const MediaSeries& series,
                                     const std::optional<std::string>& area,
                                     const TemporalWindows& windows);

struct LoadOptions {
  std::optional<Date> t_a;  // required when media features are computed
  bool gap_enabled = true;
};

struct LoadedData {
  Dataset data;
  std::optional<MediaSeries> media;
  bool media_from_series = false;
};

SubredditCatalog load_catalog(const std::string& path);
MediaSeries load_media(const std::string& path);

/// Loads and cross-validates catalog + users (+ optional media series
/// and interactions override). When the users file carries no media
/// columns, features are computed from the series over the windows and
/// z-scored over the population. Throws std::invalid_argument with
/// file/line context on schema violations.
LoadedData load_dataset(const std::string& catalog_path,
                        const std::string& users_path,
                        const std::optional<std::string>& media_path = {},
                        const std::optional<std::string>& interactions_path = {},
                        const LoadOptions& options = {});

std::string catalog_to_csv(const SubredditCatalog& catalog);
std::string users_to_csv(const Dataset& data);
std::string latents_to_csv(const Dataset& data, const LatentState& latents);

}  // namespace climact
