#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citescope/author_profiler.hpp"
#include "citescope/geocoder.hpp"

namespace citescope {

enum class ColorBucket { light_blue, blue, amber, orange, red };

std::string_view to_string(ColorBucket b);
std::optional<ColorBucket> color_bucket_from(std::string_view s);
std::string_view bucket_hex(ColorBucket b);

/// max(7, 7 + 10 log2(n + 1)); n must be at least 1.
double marker_radius(int n);

/// 1 light_blue, 2-3 blue, 4-6 amber, 7-10 orange, 11+ red.
ColorBucket marker_color(int n);

struct RosterEntry {
  std::string name;
  std::string institution;

  friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

struct CityCluster {
  std::string city;
  std::string country;
  GeoPoint point;
  std::vector<RosterEntry> researchers;  // alphabetical, one entry per name
  int n = 0;
  double radius_px = 0.0;
  ColorBucket color_bucket = ColorBucket::light_blue;

  friend bool operator==(const CityCluster&, const CityCluster&) = default;
};

using CityKey = std::pair<std::string, std::string>;  // (city, country code)
using GeocodeTable = std::map<CityKey, std::optional<GeoPoint>>;

/// Looks up every distinct nonempty city once.
GeocodeTable geocode_records(const std::vector<AuthorRecord>& records, Geocoder& geocoder);

/// One cluster per (city, country) with a resolved point, ordered by n
/// descending then city name. Records with no city or no point are left out.
std::vector<CityCluster> build_city_clusters(const std::vector<AuthorRecord>& records,
                                             const GeocodeTable& geocodes);

/// One point per rostered researcher, at their cluster's location.
std::vector<GeoPoint> heat_points(const std::vector<CityCluster>& clusters);

inline constexpr std::string_view kDataIslandId = "citation-data";
inline constexpr std::string_view kTileUrlTemplate = "https://{s}.tile.openstreetmap.org/{z}/{x}/{y}.png";

/// JSON text of the data island (no HTML escaping applied).
std::string data_island_json(const std::vector<CityCluster>& clusters, const std::vector<GeoPoint>& heat,
                             const std::string& title);

/// A single HTML document with the map libraries, styles, data and script
/// inlined. Only the tile server is fetched at view time.
std::string render_map_html(const std::vector<CityCluster>& clusters, const std::vector<GeoPoint>& heat,
                            const std::string& title);

struct MapData {
  std::vector<CityCluster> clusters;
  std::vector<GeoPoint> heat;
  std::string title;
};

/// Reads the data island back out of an emitted document. Throws
/// std::runtime_error when it is missing or malformed.
MapData parse_data_island(std::string_view html);

}  // namespace citescope
