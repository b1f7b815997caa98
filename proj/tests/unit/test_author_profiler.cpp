#include <doctest.h>

#include "citescope/author_profiler.hpp"
#include "support.hpp"

using namespace citescope;

namespace {

struct Offline {
  explicit Offline(const std::string& corpus) : backend(testing::fixtures() / corpus), transport(backend, clock) {}
  FixtureBackend backend;
  SimulatedClock clock;
  Transport transport;
};

std::size_t institution_calls(const Transport& t) {
  std::size_t n = 0;
  for (const auto& c : t.call_log()) n += c.url.find("/institutions/") != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("entity URL rewrite") {
  CHECK(institution_api_url("https://openalex.org/I27837315") == "https://api.openalex.org/institutions/I27837315");
  CHECK(institution_api_url("https://openalex.org/I1") == "https://api.openalex.org/institutions/I1");
  CHECK(author_api_url("https://openalex.org/A5") == "https://api.openalex.org/authors/A5");
  try {
    institution_api_url("https://example.org/I27837315");
    FAIL("expected an error");
  } catch (const InstitutionUrlError& e) {
    CHECK(std::string(e.what()).find("https://example.org/") != std::string::npos);
  }
  CHECK_THROWS_AS(institution_api_url("I27837315"), InstitutionUrlError);
}

TEST_CASE("person filter") {
  CHECK_FALSE(is_person("Proceedings Committee of the Annual Conference"));
  CHECK(is_person("John Smith"));
  CHECK_FALSE(is_person("Team 5 Robotics"));
  CHECK_FALSE(is_person("   "));
  CHECK(is_person("Zo\xC3\xAB M\xC3\xBCller"));
  const auto custom = parse_blocklist("# comment\nRobotics  # trailing\n\n  LAB \n");
  CHECK(custom == Blocklist{"robotics", "lab"});
  CHECK_FALSE(is_person("Acme Robotics", custom));
  CHECK(is_person("Proceedings Committee", custom));
  for (const char* t : {"association", "conference", "proceedings", "committee"}) CHECK(default_org_blocklist().count(t));
}

TEST_CASE("each source of the cascade against the case corpus") {
  Offline o("case1");
  AuthorProfiler p(o.transport, {});
  const auto golden = testing::golden("case1")["author_records"];

  auto expected_for = [&](const std::string& title) {
    std::vector<nlohmann::json> out;
    for (const auto& r : golden)
      if (r["citing_paper_title"] == title) out.push_back(r);
    return out;
  };
  auto check_title = [&](const std::string& title, std::optional<ProfileSource> src) {
    INFO(title);
    const auto res = p.resolve_paper_authors(title);
    CHECK(res.source == src);
    const auto want = expected_for(title);
    REQUIRE(res.records.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      const auto& r = res.records[i];
      CHECK(r.full_name == want[i]["full_name"].get<std::string>());
      CHECK(r.institution == want[i]["institution"].get<std::string>());
      CHECK(r.country_code == want[i]["country_code"].get<std::string>());
      CHECK(r.city == want[i]["city"].get<std::string>());
      CHECK(r.author_entity_id == want[i]["author_entity_id"].get<std::string>());
      CHECK(r.institution_entity_id == want[i]["institution_entity_id"].get<std::string>());
      CHECK(to_string(r.source) == want[i]["source"].get<std::string>());
    }
    return res;
  };

  std::map<std::string, std::string> first_title_by_source;
  for (const auto& r : golden) first_title_by_source.emplace(r["source"], r["citing_paper_title"]);
  REQUIRE(first_title_by_source.size() == 3);

  const auto oa = check_title(first_title_by_source["openalex"], ProfileSource::openalex);
  for (const auto& r : oa.records) CHECK_FALSE(r.author_entity_id.empty());
  const auto s2 = check_title(first_title_by_source["semanticscholar"], ProfileSource::semanticscholar);
  for (const auto& r : s2.records) CHECK(r.city.empty());
  const auto cr = check_title(first_title_by_source["crossref"], ProfileSource::crossref);
  for (const auto& r : cr.records) CHECK(r.institution.empty());

  std::set<std::string> titles;
  for (const auto& r : golden) titles.insert(r["citing_paper_title"].get<std::string>());
  int rejected = 0;
  for (const auto& t : titles) rejected += p.resolve_paper_authors(t).rejected_names;
  CHECK(rejected == 2);
  CHECK_THROWS_AS(p.resolve_paper_authors(""), std::invalid_argument);
}

TEST_CASE("every source missing leaves the paper unresolved") {
  testing::ScriptedBackend be;
  SimulatedClock clock;
  Transport t(be, clock);
  AuthorProfiler p(t, {});
  const auto res = p.resolve_paper_authors("Nothing Anywhere");
  CHECK_FALSE(res.source);
  CHECK(res.records.empty());
  CHECK(t.call_log().size() == 3);
}

TEST_CASE("institution cities are fetched once per id, misses included") {
  testing::ScriptedBackend be;
  be.on("https://api.openalex.org/institutions/I1", 200, R"({"geo":{"city":"Lubbock"}})");
  be.on("https://api.openalex.org/institutions/I2", 200, R"({"display_name":"No Geo"})");
  be.on("https://api.openalex.org/institutions/I3", 500);
  SimulatedClock clock;
  Transport t(be, clock);
  AuthorProfiler p(t, {});
  CHECK(p.resolve_institution_city("https://openalex.org/I1") == "Lubbock");
  CHECK(p.resolve_institution_city("https://openalex.org/I1") == "Lubbock");
  CHECK(p.resolve_institution_city("https://openalex.org/I2") == "");
  CHECK(p.resolve_institution_city("https://openalex.org/I3") == "");
  const auto calls = t.call_log().size();
  CHECK(calls == 3);
  CHECK(p.resolve_institution_city("https://openalex.org/I3") == "");
  CHECK(p.resolve_institution_city("https://openalex.org/I2") == "");
  CHECK(t.call_log().size() == calls);
  CHECK(p.resolve_institution_city("https://elsewhere.org/I9") == "");
  CHECK(t.call_log().size() == calls);
  CHECK(p.institution_fetches() == 3);
}

TEST_CASE("mailto reaches the works and institution URLs") {
  CHECK(openalex_works_url("A B", "me@x.org") == "https://api.openalex.org/works?search=A%20B&per-page=1&mailto=me%40x.org");
  CHECK(openalex_works_url("A B", "") == "https://api.openalex.org/works?search=A%20B&per-page=1");
}

TEST_CASE("twelve authors over three institutions: three institution fetches") {
  Offline o("cache_bounds");
  AuthorProfiler p(o.transport, {});
  std::set<std::string> names;
  const auto g = testing::golden("cache_bounds");
  for (const auto& t : g["titles"]) {
    for (const auto& r : p.resolve_paper_authors(t.get<std::string>()).records) names.insert(r.full_name);
  }
  CHECK(names.size() == 12);
  CHECK(institution_calls(o.transport) == 3);
  CHECK(p.institution_fetches() == 3);
}
