#include <doctest.h>

#include <random>

#include "citescope/transport.hpp"
#include "support.hpp"

using namespace citescope;
using testing::ScriptedBackend;

TEST_CASE("scholar requests are spaced by the host minimum delay") {
  ScriptedBackend be;
  be.on("https://scholar.google.com/a", 200, "A");
  be.on("https://scholar.google.com/b", 200, "B");
  SimulatedClock clock;
  Transport t(be, clock);
  CHECK(t.get("https://scholar.google.com/a", HostPolicy::scholar()).body == "A");
  CHECK(t.get("https://scholar.google.com/b", HostPolicy::scholar()).body == "B");
  const auto& log = t.call_log();
  REQUIRE(log.size() == 2);
  CHECK(log[1].started_at >= log[0].started_at + 2.0);
}

TEST_CASE("browser identity only on the scholar host") {
  ScriptedBackend be;
  SimulatedClock clock;
  Transport t(be, clock);
  t.get("https://scholar.google.com/x", HostPolicy::scholar());
  t.get("https://api.openalex.org/x", HostPolicy::metadata_api());
  REQUIRE(be.seen.size() == 2);
  CHECK(be.seen[0].headers.at(0).second == kBrowserUserAgent);
  CHECK(be.seen[0].headers.at(1).first == "Accept-Language");
  CHECK(be.seen[1].headers.at(0).second == kToolUserAgent);
}

TEST_CASE("429 then 200 waits 30 s once and succeeds") {
  ScriptedBackend be;
  be.on("https://scholar.google.com/p", 429);
  be.on("https://scholar.google.com/p", 200, "ok");
  SimulatedClock clock;
  Transport t(be, clock);
  const auto r = t.get("https://scholar.google.com/p", HostPolicy::scholar());
  CHECK(r.outcome == Outcome::ok);
  CHECK(r.body == "ok");
  CHECK(clock.sleeps() == std::vector<double>{30.0});
  CHECK(t.call_log().size() == 2);
}

TEST_CASE("429 twice is a skip, not an error") {
  ScriptedBackend be;
  be.on("https://scholar.google.com/p", 429);
  SimulatedClock clock;
  Transport t(be, clock);
  const auto r = t.get("https://scholar.google.com/p", HostPolicy::scholar());
  CHECK(r.outcome == Outcome::rate_limited_skipped);
  CHECK(t.call_log().size() == 2);
}

TEST_CASE("network failures and HTTP errors come back as outcomes") {
  ScriptedBackend be;
  be.fail("https://api.crossref.org/down", "connection refused");
  be.on("https://api.crossref.org/500", 500, "oops");
  SimulatedClock clock;
  Transport t(be, clock);
  auto r = t.get("https://api.crossref.org/down", HostPolicy::metadata_api());
  CHECK(r.outcome == Outcome::error);
  CHECK(r.diagnostic == "connection refused");
  r = t.get("https://api.crossref.org/500", HostPolicy::metadata_api());
  CHECK(r.outcome == Outcome::error);
  CHECK(r.diagnostic == "HTTP 500");
  r = t.get("garbage", HostPolicy::metadata_api());
  CHECK(r.outcome == Outcome::error);
  CHECK(t.call_log().size() == 2);
}

TEST_CASE("fixture backend plays back the manifest") {
  testing::TempDir dir("fixture");
  {
    std::ofstream(dir.path() / "page.html") << "<html>hi</html>";
    std::ofstream(dir.path() / "manifest.json")
        << R"({"https://scholar.google.com/citations?user=X&hl=en": {"file": "page.html", "status": 200},
               "https://scholar.google.com/limited": {"status": [429, 200], "file": "page.html"}})";
  }
  FixtureBackend be(dir.path());
  SimulatedClock clock;
  Transport t(be, clock);
  auto r = t.get("https://scholar.google.com/citations?hl=en&user=X", HostPolicy::scholar());
  CHECK(r.status == 200);
  CHECK(r.body == "<html>hi</html>");
  CHECK(t.get("https://scholar.google.com/nope", HostPolicy::scholar()).status == 404);
  r = t.get("https://scholar.google.com/limited", HostPolicy::scholar());
  CHECK(r.ok());
  CHECK(clock.sleeps().back() == 30.0);
}

TEST_CASE("fixture backend rejects a missing or corrupt manifest") {
  testing::TempDir dir("badmanifest");
  CHECK_THROWS_AS(FixtureBackend(dir.path()), FixtureError);
  std::ofstream(dir.path() / "manifest.json") << "{not json";
  CHECK_THROWS_AS(FixtureBackend(dir.path()), FixtureError);
  std::ofstream(dir.path() / "manifest.json") << R"({"https://x/y": {"file": "a"}})";
  CHECK_THROWS_AS(FixtureBackend(dir.path()), FixtureError);
}

TEST_CASE("pacing and retry invariants hold for random request mixes") {
  const std::vector<std::string> hosts{"scholar.google.com", "api.openalex.org", "nominatim.openstreetmap.org"};
  std::mt19937 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    ScriptedBackend be;
    SimulatedClock clock;
    Transport t(be, clock);
    std::uniform_int_distribution<int> pick(0, 2), status(0, 3), think(0, 3);
    int logical = 0;
    for (int i = 0; i < 40; ++i) {
      const auto& host = hosts[pick(rng)];
      const auto u = "https://" + host + "/r" + std::to_string(i);
      const int s = status(rng);
      if (s == 0) be.on(u, 429);
      if (s == 1) {
        be.on(u, 429);
        be.on(u, 200);
      }
      if (s >= 2) be.on(u, 200);
      const auto policy = host == hosts[0] ? HostPolicy::scholar()
                          : host == hosts[1] ? HostPolicy::metadata_api()
                                             : HostPolicy::geocoder();
      const auto before = t.call_log().size();
      t.get(u, policy);
      ++logical;
      CHECK(t.call_log().size() - before <= 1u + static_cast<unsigned>(policy.max_retries));
      clock.sleep_for(think(rng) * 0.3);
    }
    std::map<std::string, double> last;
    for (const auto& c : t.call_log()) {
      const double gap = c.host == hosts[0] ? 2.0 : c.host == hosts[1] ? 1.0 : 1.1;
      if (last.count(c.host)) CHECK(c.started_at - last[c.host] >= gap - 1e-9);
      last[c.host] = c.started_at;
    }
    CHECK(logical == 40);
  }
}
