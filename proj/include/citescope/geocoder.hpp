#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "citescope/transport.hpp"

namespace citescope {

/// Degrees; construction rejects non-finite or out-of-range values.
class GeoPoint {
 public:
  GeoPoint(double latitude, double longitude);

  double latitude() const { return lat_; }
  double longitude() const { return lng_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_;
  double lng_;
};

/// "{city}, {country name}" (the code is passed through when unknown).
std::string geocode_query(std::string_view city, std::string_view country_code);
std::string nominatim_search_url(std::string_view query);

/// First result's coordinates from a search response, if any.
std::optional<GeoPoint> parse_nominatim_response(std::string_view body);

/// City lookups for one run. Each distinct (city, country) reaches the
/// service at most once; misses are remembered too.
class Geocoder {
 public:
  explicit Geocoder(Transport& transport) : transport_(transport) {}

  /// Requires a nonempty city.
  std::optional<GeoPoint> geocode_city(const std::string& city, const std::string& country_code);

  std::size_t upstream_requests() const { return upstream_requests_; }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  Transport& transport_;
  std::map<std::pair<std::string, std::string>, std::optional<GeoPoint>> cache_;
  std::size_t upstream_requests_ = 0;
};

}  // namespace citescope
