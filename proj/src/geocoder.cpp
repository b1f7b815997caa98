#include "citescope/geocoder.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "citescope/countries.hpp"
#include "citescope/text.hpp"
#include "citescope/url.hpp"

namespace citescope {

GeoPoint::GeoPoint(double latitude, double longitude) : lat_(latitude), lng_(longitude) {
  if (!std::isfinite(latitude) || latitude < -90.0 || latitude > 90.0)
    throw std::out_of_range("latitude out of range: " + std::to_string(latitude));
  if (!std::isfinite(longitude) || longitude < -180.0 || longitude > 180.0)
    throw std::out_of_range("longitude out of range: " + std::to_string(longitude));
}

std::string geocode_query(std::string_view city, std::string_view country_code) {
  const auto city_t = text::trim(city);
  const auto code = text::trim(country_code);
  if (code.empty()) return city_t;
  return city_t + ", " + country_label(code);
}

std::string nominatim_search_url(std::string_view query) {
  return url::build("https://nominatim.openstreetmap.org/search",
                    {{"q", std::string(query)}, {"format", "json"}, {"limit", "1"}});
}

namespace {

std::optional<double> coordinate(const nlohmann::json& item, const char* key) {
  const auto it = item.find(key);
  if (it == item.end()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  if (!it->is_string()) return std::nullopt;
  const auto s = it->get<std::string>();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<GeoPoint> parse_nominatim_response(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_array() || doc.empty() || !doc[0].is_object()) return std::nullopt;
  const auto lat = coordinate(doc[0], "lat");
  const auto lon = coordinate(doc[0], "lon");
  if (!lat || !lon) return std::nullopt;
  try {
    return GeoPoint(*lat, *lon);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

std::optional<GeoPoint> Geocoder::geocode_city(const std::string& city, const std::string& country_code) {
  if (text::trim(city).empty()) throw std::invalid_argument("geocode_city: empty city");
  const auto key = std::make_pair(city, country_code);
  if (const auto it = cache_.find(key); it != cache_.end()) return it->second;

  ++upstream_requests_;
  const auto resp = transport_.get(nominatim_search_url(geocode_query(city, country_code)),
                                   HostPolicy::geocoder());
  std::optional<GeoPoint> point;
  if (resp.ok()) point = parse_nominatim_response(resp.body);
  cache_.emplace(key, point);
  return point;
}

}  // namespace citescope
