#include <doctest.h>

#include <cmath>

#include "citescope/assets.hpp"
#include "citescope/geocoder.hpp"
#include "citescope/map_builder.hpp"
#include "citescope/records_io.hpp"
#include "support.hpp"

using namespace citescope;

namespace {

AuthorRecord rec(std::string name, std::string city, std::string cc, std::string inst = "X") {
  AuthorRecord r;
  r.full_name = std::move(name);
  r.citing_paper_title = "p";
  r.city = std::move(city);
  r.country_code = std::move(cc);
  r.institution = std::move(inst);
  return r;
}

struct Offline {
  explicit Offline(const std::string& corpus) : backend(testing::fixtures() / corpus), transport(backend, clock) {}
  FixtureBackend backend;
  SimulatedClock clock;
  Transport transport;
};

}  // namespace

TEST_CASE("geo points validate their range") {
  CHECK_NOTHROW(GeoPoint(90, 180));
  CHECK_NOTHROW(GeoPoint(-90, -180));
  CHECK_THROWS_AS(GeoPoint(90.01, 0), std::out_of_range);
  CHECK_THROWS_AS(GeoPoint(0, -180.5), std::out_of_range);
  CHECK_THROWS_AS(GeoPoint(NAN, 0), std::out_of_range);
}

TEST_CASE("geocoder queries and decoding") {
  CHECK(geocode_query("Lubbock", "US") == "Lubbock, United States");
  CHECK(geocode_query("Lubbock", "") == "Lubbock");
  CHECK(geocode_query("Gotham", "XX") == "Gotham, XX");
  CHECK(nominatim_search_url("Lubbock, United States") ==
        "https://nominatim.openstreetmap.org/search?q=Lubbock%2C%20United%20States&format=json&limit=1");
  const auto p = parse_nominatim_response(R"([{"lat":"33.5779","lon":"-101.8552"},{"lat":"0","lon":"0"}])");
  REQUIRE(p);
  CHECK(p->latitude() == doctest::Approx(33.5779));
  CHECK(p->longitude() == doctest::Approx(-101.8552));
  CHECK(parse_nominatim_response(R"([{"lat":1.5,"lon":2}])")->latitude() == 1.5);
  CHECK_FALSE(parse_nominatim_response("[]"));
  CHECK_FALSE(parse_nominatim_response("garbage"));
  CHECK_FALSE(parse_nominatim_response(R"([{"lat":"95","lon":"0"}])"));
}

TEST_CASE("each city reaches the geocoding service once") {
  testing::ScriptedBackend be;
  be.on(nominatim_search_url("Lubbock, United States"), 200, R"([{"lat":"33.5779","lon":"-101.8552"}])");
  SimulatedClock clock;
  Transport t(be, clock);
  Geocoder g(t);
  const auto a = g.geocode_city("Lubbock", "US");
  const auto b = g.geocode_city("Lubbock", "US");
  REQUIRE(a);
  CHECK(*a == *b);
  CHECK(g.upstream_requests() == 1);
  CHECK(t.call_log().size() == 1);

  CHECK_FALSE(g.geocode_city("Atlantis", "GR"));
  CHECK_FALSE(g.geocode_city("Atlantis", "GR"));
  CHECK(t.call_log().size() == 2);
  CHECK(g.cache_size() == 2);
  CHECK_THROWS_AS(g.geocode_city("", "US"), std::invalid_argument);
  CHECK(t.call_log().size() == 2);
}

TEST_CASE("twenty records over five cities: five geocoder requests") {
  Offline o("cache_bounds");
  const auto gold = testing::golden("cache_bounds");
  std::vector<AuthorRecord> rs;
  for (int i = 0; i < 20; ++i) {
    const auto& c = gold["cities"][i % 5];
    rs.push_back(rec("R" + std::to_string(i), c[0].get<std::string>(), c[1].get<std::string>()));
  }
  Geocoder g(o.transport);
  const auto table = geocode_records(rs, g);
  CHECK(table.size() == 5);
  CHECK(g.upstream_requests() == 5);
  CHECK(o.transport.calls_to("nominatim.openstreetmap.org") == 5);
  for (const auto& [k, v] : table) CHECK(v.has_value());
  // the unknown city stays unknown without another request
  CHECK_FALSE(g.geocode_city("Atlantis", "GR"));
  CHECK_FALSE(g.geocode_city("Atlantis", "GR"));
  CHECK(o.transport.calls_to("nominatim.openstreetmap.org") == 6);
}

TEST_CASE("marker radius") {
  CHECK(marker_radius(1) == doctest::Approx(17.0).epsilon(1e-12));
  CHECK(marker_radius(2) == doctest::Approx(7 + 10 * std::log2(3.0)).epsilon(1e-12));
  CHECK(marker_radius(3) == doctest::Approx(27.0).epsilon(1e-12));
  CHECK(marker_radius(7) == doctest::Approx(37.0).epsilon(1e-12));
  CHECK(marker_radius(15) == doctest::Approx(47.0).epsilon(1e-12));
  CHECK_THROWS_AS(marker_radius(0), std::invalid_argument);
  for (int n = 1; n < 10000; ++n) CHECK(marker_radius(n + 1) > marker_radius(n));
}

TEST_CASE("colour buckets") {
  CHECK(marker_color(1) == ColorBucket::light_blue);
  CHECK(marker_color(2) == ColorBucket::blue);
  CHECK(marker_color(3) == ColorBucket::blue);
  CHECK(marker_color(4) == ColorBucket::amber);
  CHECK(marker_color(6) == ColorBucket::amber);
  CHECK(marker_color(7) == ColorBucket::orange);
  CHECK(marker_color(10) == ColorBucket::orange);
  CHECK(marker_color(11) == ColorBucket::red);
  CHECK(marker_color(500) == ColorBucket::red);
  CHECK_THROWS(marker_color(0));
  for (auto b : {ColorBucket::light_blue, ColorBucket::blue, ColorBucket::amber, ColorBucket::orange, ColorBucket::red}) {
    CHECK(color_bucket_from(to_string(b)) == b);
    CHECK(bucket_hex(b).size() == 7);
  }
}

TEST_CASE("clustering") {
  GeocodeTable geo;
  geo[{"Lubbock", "US"}] = GeoPoint(33.5, -101.8);
  geo[{"Seoul", "KR"}] = GeoPoint(37.5, 127.0);
  geo[{"Nowhere", "US"}] = std::nullopt;

  const auto three = build_city_clusters({rec("C", "Lubbock", "US"), rec("A", "Lubbock", "US"), rec("B", "Lubbock", "US"),
                                          rec("A", "Lubbock", "US", "dup")},
                                         geo);
  REQUIRE(three.size() == 1);
  CHECK(three[0].n == 3);
  CHECK(three[0].radius_px == doctest::Approx(27.0));
  CHECK(three[0].color_bucket == ColorBucket::blue);
  CHECK(three[0].researchers == std::vector<RosterEntry>{{"A", "X"}, {"B", "X"}, {"C", "X"}});

  const auto two = build_city_clusters({rec("S", "Seoul", "KR"), rec("L1", "Lubbock", "US"), rec("L2", "Lubbock", "US"),
                                        rec("E", "", "US"), rec("N", "Nowhere", "US")},
                                       geo);
  REQUIRE(two.size() == 2);
  CHECK(two[0].city == "Lubbock");
  CHECK(two[1].city == "Seoul");
  CHECK(heat_points(two).size() == 3);

  const auto tie = build_city_clusters({rec("S", "Seoul", "KR"), rec("L", "Lubbock", "US")}, geo);
  CHECK(tie[0].city == "Lubbock");
}

TEST_CASE("map document: data island, assets and empty map") {
  GeocodeTable geo;
  geo[{"Lubbock", "US"}] = GeoPoint(33.5, -101.8);
  geo[{"Seoul", "KR"}] = GeoPoint(37.5, 127.0);
  const auto clusters = build_city_clusters(
      {rec("<script>alert(1)</script>", "Lubbock", "US", "A & B"), rec("Z", "Seoul", "KR"), rec("Y", "Seoul", "KR")}, geo);
  const auto heat = heat_points(clusters);
  const auto html = render_map_html(clusters, heat, "Researchers citing <Someone>");

  std::size_t islands = 0;
  for (auto p = html.find("id=\"citation-data\""); p != std::string::npos; p = html.find("id=\"citation-data\"", p + 1))
    ++islands;
  CHECK(islands == 1);
  CHECK(html.find("<script>alert(1)</script>") == std::string::npos);
  CHECK(html.find("L.heatLayer") != std::string::npos);
  CHECK(html.find("cs-legend") != std::string::npos);
  CHECK(html.find(std::string(assets::map_script_js().substr(0, 60))) != std::string::npos);
  CHECK(html.find("sourceMappingURL") == std::string::npos);

  const auto back = parse_data_island(html);
  CHECK(back.title == "Researchers citing <Someone>");
  REQUIRE(back.clusters.size() == clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) CHECK(back.clusters[i] == clusters[i]);
  CHECK(back.heat == heat);

  const auto empty = render_map_html({}, {}, "Empty");
  const auto e = parse_data_island(empty);
  CHECK(e.clusters.empty());
  CHECK(e.heat.empty());
  CHECK(empty.find("cs-legend") != std::string::npos);
  CHECK_THROWS_AS(parse_data_island("<html></html>"), std::runtime_error);
  CHECK_THROWS_AS(parse_data_island("<script type=\"application/json\" id=\"citation-data\">{bad</script>"),
                  std::runtime_error);
}

TEST_CASE("134 researchers over 28 cities") {
  GeocodeTable geo;
  std::vector<AuthorRecord> rs;
  int person = 0;
  for (int c = 0; c < 28; ++c) {
    const auto city = "City" + std::to_string(c);
    geo[{city, "US"}] = GeoPoint(c, c);
    const int n = c < 2 ? 20 + c * 19 : (c < 10 ? 4 : 1);
    for (int i = 0; i < n; ++i) rs.push_back(rec("P" + std::to_string(person++), city, "US"));
  }
  while (person < 134) rs.push_back(rec("P" + std::to_string(person++), "", "US"));
  const auto clusters = build_city_clusters(rs, geo);
  const auto heat = heat_points(clusters);
  CHECK(clusters.size() == 28);
  int total = 0;
  for (const auto& c : clusters) total += c.n;
  CHECK(static_cast<int>(heat.size()) == total);
  const auto island = parse_data_island(render_map_html(clusters, heat, "t"));
  CHECK(island.clusters.size() == 28);
  CHECK(island.heat.size() == heat.size());
}

TEST_CASE("map script reads the island and handles the empty and broken cases") {
  const auto js = std::string(assets::map_script_js());
  CHECK(js.find("citation-data") != std::string::npos);
  CHECK(js.find("cs-error") != std::string::npos);
  CHECK(js.find("radius_px") != std::string::npos);
  CHECK(js.find("setView([20, 0], 2)") != std::string::npos);
  CHECK(js.find(std::string(kTileUrlTemplate)) != std::string::npos);
}
