#include "citescope/map_builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "citescope/assets.hpp"
#include "citescope/html.hpp"
#include "citescope/text.hpp"

namespace citescope {

using nlohmann::json;

namespace {

constexpr ColorBucket kAllBuckets[] = {ColorBucket::light_blue, ColorBucket::blue, ColorBucket::amber,
                                       ColorBucket::orange, ColorBucket::red};

std::string_view bucket_label(ColorBucket b) {
  switch (b) {
    case ColorBucket::light_blue: return "1 researcher";
    case ColorBucket::blue: return "2-3 researchers";
    case ColorBucket::amber: return "4-6 researchers";
    case ColorBucket::orange: return "7-10 researchers";
    case ColorBucket::red: return "11+ researchers";
  }
  return "";
}

std::string strip_source_map(std::string_view js) {
  std::string out;
  std::size_t start = 0;
  while (start < js.size()) {
    auto end = js.find('\n', start);
    const auto stop = end == std::string_view::npos ? js.size() : end + 1;
    const auto line = js.substr(start, stop - start);
    if (!text::starts_with(text::trim(line), "//# sourceMappingURL=")) out.append(line);
    start = stop;
  }
  return out;
}

// Image references in the stylesheet would point next to the document.
std::string strip_relative_urls(std::string_view css) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto at = css.find("url(", pos);
    if (at == std::string_view::npos) break;
    const auto close = css.find(')', at);
    if (close == std::string_view::npos) break;
    auto target = text::trim(css.substr(at + 4, close - at - 4));
    if (!target.empty() && (target.front() == '"' || target.front() == '\'')) target = target.substr(1);
    out.append(css.substr(pos, at - pos));
    if (text::starts_with(target, "#") || text::starts_with(target, "data:")) {
      out.append(css.substr(at, close + 1 - at));
    } else {
      out.append("none");
    }
    pos = close + 1;
  }
  out.append(css.substr(pos));
  return out;
}

// Keeps "</script" and "<!--" from ending the island early.
std::string script_safe(std::string s) { return text::replace_all(std::move(s), "<", "\\u003c"); }

}  // namespace

std::string_view to_string(ColorBucket b) {
  switch (b) {
    case ColorBucket::light_blue: return "light_blue";
    case ColorBucket::blue: return "blue";
    case ColorBucket::amber: return "amber";
    case ColorBucket::orange: return "orange";
    case ColorBucket::red: return "red";
  }
  return "light_blue";
}

std::optional<ColorBucket> color_bucket_from(std::string_view s) {
  for (auto b : kAllBuckets) {
    if (to_string(b) == s) return b;
  }
  return std::nullopt;
}

std::string_view bucket_hex(ColorBucket b) {
  switch (b) {
    case ColorBucket::light_blue: return "#ADD8E6";
    case ColorBucket::blue: return "#3388FF";
    case ColorBucket::amber: return "#FFC107";
    case ColorBucket::orange: return "#FF8C00";
    case ColorBucket::red: return "#DC143C";
  }
  return "#ADD8E6";
}

double marker_radius(int n) {
  if (n < 1) throw std::invalid_argument("marker_radius: n must be >= 1");
  return std::max(7.0, 7.0 + 10.0 * std::log2(static_cast<double>(n) + 1.0));
}

ColorBucket marker_color(int n) {
  if (n < 1) throw std::invalid_argument("marker_color: n must be >= 1");
  if (n == 1) return ColorBucket::light_blue;
  if (n <= 3) return ColorBucket::blue;
  if (n <= 6) return ColorBucket::amber;
  if (n <= 10) return ColorBucket::orange;
  return ColorBucket::red;
}

GeocodeTable geocode_records(const std::vector<AuthorRecord>& records, Geocoder& geocoder) {
  GeocodeTable table;
  for (const auto& r : records) {
    if (text::trim(r.city).empty()) continue;
    CityKey key{r.city, r.country_code};
    if (table.count(key)) continue;
    table.emplace(key, geocoder.geocode_city(r.city, r.country_code));
  }
  return table;
}

std::vector<CityCluster> build_city_clusters(const std::vector<AuthorRecord>& records,
                                             const GeocodeTable& geocodes) {
  std::map<CityKey, std::map<std::string, std::string>> rosters;
  for (const auto& r : records) {
    if (text::trim(r.city).empty()) continue;
    CityKey key{r.city, r.country_code};
    const auto g = geocodes.find(key);
    if (g == geocodes.end() || !g->second) continue;
    rosters[key].emplace(r.full_name, r.institution);  // first institution seen wins
  }

  std::vector<CityCluster> out;
  for (const auto& [key, roster] : rosters) {
    std::vector<RosterEntry> people;
    for (const auto& [name, inst] : roster) people.push_back({name, inst});
    const int n = static_cast<int>(people.size());
    out.push_back(CityCluster{key.first, key.second, *geocodes.at(key), std::move(people), n,
                              marker_radius(n), marker_color(n)});
  }
  std::stable_sort(out.begin(), out.end(), [](const CityCluster& a, const CityCluster& b) {
    if (a.n != b.n) return a.n > b.n;
    if (a.city != b.city) return a.city < b.city;
    return a.country < b.country;
  });
  return out;
}

std::vector<GeoPoint> heat_points(const std::vector<CityCluster>& clusters) {
  std::vector<GeoPoint> out;
  for (const auto& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.n), c.point);
  return out;
}

std::string data_island_json(const std::vector<CityCluster>& clusters, const std::vector<GeoPoint>& heat,
                             const std::string& title) {
  json doc;
  doc["title"] = title;
  doc["clusters"] = json::array();
  for (const auto& c : clusters) {
    json people = json::array();
    for (const auto& r : c.researchers) people.push_back({{"name", r.name}, {"institution", r.institution}});
    doc["clusters"].push_back({{"city", c.city},
                               {"country", c.country},
                               {"lat", c.point.latitude()},
                               {"lng", c.point.longitude()},
                               {"n", c.n},
                               {"radius_px", c.radius_px},
                               {"color_bucket", std::string(to_string(c.color_bucket))},
                               {"color", std::string(bucket_hex(c.color_bucket))},
                               {"researchers", std::move(people)}});
  }
  doc["heat"] = json::array();
  for (const auto& p : heat) doc["heat"].push_back({p.latitude(), p.longitude()});
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string render_map_html(const std::vector<CityCluster>& clusters, const std::vector<GeoPoint>& heat,
                            const std::string& title) {
  const auto script = assets::map_script_js();
  const auto leaflet = assets::leaflet_js();
  if (script.empty() || leaflet.empty()) throw std::logic_error("map template assets are missing");

  std::string legend;
  for (auto b : kAllBuckets) {
    legend += "<div class=\"cs-legend-row\"><span class=\"cs-swatch\" style=\"background:";
    legend += bucket_hex(b);
    legend += "\"></span>";
    legend += bucket_label(b);
    legend += "</div>\n";
  }

  std::string out;
  out.reserve(leaflet.size() + 64 * 1024);
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n";
  out += "<title>" + html::escape(title) + "</title>\n";
  out += "<style>\n" + strip_relative_urls(assets::leaflet_css()) + "\n</style>\n";
  out += R"(<style>
html, body { height: 100%; margin: 0; font-family: Helvetica, Arial, sans-serif; }
#map { position: absolute; inset: 0; }
.cs-title { position: absolute; top: 10px; left: 50%; transform: translateX(-50%); z-index: 1000;
  background: rgba(255,255,255,0.9); padding: 6px 14px; border-radius: 4px; font-size: 16px;
  font-weight: bold; box-shadow: 0 1px 4px rgba(0,0,0,0.3); pointer-events: none; }
.cs-legend { position: absolute; bottom: 24px; left: 10px; z-index: 1000; background: rgba(255,255,255,0.92);
  padding: 8px 10px; border-radius: 4px; font-size: 12px; box-shadow: 0 1px 4px rgba(0,0,0,0.3); }
.cs-legend-row { display: flex; align-items: center; margin: 2px 0; }
.cs-swatch { display: inline-block; width: 12px; height: 12px; border-radius: 50%; margin-right: 6px;
  border: 1px solid #333; }
.cs-roster { margin: 4px 0 0; padding-left: 16px; }
.cs-error { position: absolute; top: 50px; left: 10px; right: 10px; z-index: 2000; background: #fdecea;
  color: #611a15; border: 1px solid #f5c2c0; padding: 10px; font-size: 14px; }
</style>
</head>
<body>
<div id="map"></div>
)";
  out += "<div class=\"cs-title\">" + html::escape(title) + "</div>\n";
  out += "<div class=\"cs-legend\"><div><strong>Citing researchers per city</strong></div>\n" + legend +
         "</div>\n";
  out += "<script type=\"application/json\" id=\"" + std::string(kDataIslandId) + "\">" +
         script_safe(data_island_json(clusters, heat, title)) + "</script>\n";
  out += "<script>\n" + strip_source_map(leaflet) + "\n</script>\n";
  out += "<script>\n" + std::string(assets::leaflet_heat_js()) + "\n</script>\n";
  out += "<script>\n" + std::string(script) + "\n</script>\n";
  out += "</body>\n</html>\n";
  return out;
}

MapData parse_data_island(std::string_view page) {
  const auto doc = html::Document::parse(page);
  const auto* node = doc.by_id(kDataIslandId);
  if (!node) throw std::runtime_error("data island not found");
  std::string raw;
  for (const auto& c : node->children()) raw += c->text();
  const auto island = json::parse(raw, nullptr, false);
  if (island.is_discarded() || !island.is_object()) throw std::runtime_error("data island is not a JSON object");

  MapData out;
  try {
    out.title = island.at("title").get<std::string>();
    for (const auto& c : island.at("clusters")) {
      std::vector<RosterEntry> people;
      for (const auto& r : c.at("researchers"))
        people.push_back({r.at("name").get<std::string>(), r.at("institution").get<std::string>()});
      const auto bucket = color_bucket_from(c.at("color_bucket").get<std::string>());
      if (!bucket) throw std::runtime_error("unknown color bucket");
      out.clusters.push_back(CityCluster{c.at("city").get<std::string>(), c.at("country").get<std::string>(),
                                         GeoPoint(c.at("lat").get<double>(), c.at("lng").get<double>()),
                                         std::move(people), c.at("n").get<int>(),
                                         c.at("radius_px").get<double>(), *bucket});
    }
    for (const auto& p : island.at("heat")) out.heat.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("data island malformed: ") + e.what());
  }
  return out;
}

}  // namespace citescope
