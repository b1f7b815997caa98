#include <doctest.h>

#include "citescope/citation_collector.hpp"
#include "citescope/scholar_parser.hpp"
#include "citescope/url.hpp"
#include "support.hpp"

using namespace citescope;
using nlohmann::json;

namespace {

std::string corpus_file(const std::string& corpus, const std::string& url) {
  const auto manifest = json::parse(testing::slurp(testing::fixtures() / corpus / "manifest.json"));
  return testing::slurp(testing::fixtures() / corpus / manifest.at(url).at("file").get<std::string>());
}

std::string page(const std::string& name) { return testing::slurp(testing::fixtures() / "pages" / name); }

}  // namespace

TEST_CASE("meta line examples") {
  CHECK(parse_meta("A Smith, B Jones\xC2\xA0- 2025 IEEE/ACM SC Conference, 2025\xC2\xA0- IEEE") ==
        MetaFields{"A Smith, B Jones", "2025 IEEE/ACM SC Conference", "2025"});
  CHECK(parse_meta("A Smith - Nature, 2019 - NPG") == MetaFields{"A Smith", "Nature", "2019"});
  CHECK(parse_meta("A Smith") == MetaFields{"A Smith", "", ""});
  CHECK(parse_meta("A Smith \xE2\x80\x94 Some Venue \xE2\x80\x94 Publisher") == MetaFields{"A Smith", "Some Venue", ""});
  CHECK(parse_meta("W Li - arXiv preprint arXiv:2401.01234, 2024 - arxiv.org").year == "2024");
}

TEST_CASE("meta corpus matches the independent splitter") {
  const auto corpus = json::parse(testing::slurp(testing::fixtures() / "meta_corpus.json"));
  REQUIRE(corpus.size() == 30);
  for (const auto& e : corpus) {
    const auto m = parse_meta(e["raw"].get<std::string>());
    INFO(e["raw"].get<std::string>());
    CHECK(m.authors == e["authors"].get<std::string>());
    CHECK(m.venue == e["venue"].get<std::string>());
    CHECK(m.year == e["year"].get<std::string>());
  }
}

TEST_CASE("truncation markers and years") {
  CHECK(has_truncation_marker("A, B\xE2\x80\xA6"));
  CHECK(has_truncation_marker("A, B..."));
  CHECK(has_truncation_marker("A, B... "));
  CHECK_FALSE(has_truncation_marker("A, B"));
  CHECK(is_publication_year("1999"));
  CHECK(is_publication_year("2026"));
  CHECK_FALSE(is_publication_year("1899"));
  CHECK_FALSE(is_publication_year("20255"));
  CHECK(split_scholar_authors("A Smith, B Jones, C Lee\xE2\x80\xA6") ==
        std::vector<std::string>{"A Smith", "B Jones", "C Lee"});
  CHECK(split_scholar_authors("A Smith, B Jones...") == std::vector<std::string>{"A Smith", "B Jones"});
}

TEST_CASE("profile page with seven rows") {
  const auto g = testing::golden("case1");
  const auto html = corpus_file("case1", profile_page_url(g["user_id"].get<std::string>(), 0));
  const auto rows = parse_profile_rows(html);
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& want = g["papers_csv"][i];
    CHECK(rows[i].title == want[0].get<std::string>());
    CHECK(rows[i].authors_raw == want[1].get<std::string>());
    CHECK(rows[i].venue == want[2].get<std::string>());
    CHECK(rows[i].year == want[3].get<std::string>());
    CHECK(std::to_string(rows[i].citation_count) == want[4].get<std::string>());
    CHECK(url::resolve(kScholarOrigin, rows[i].detail_url) == want[5].get<std::string>());
  }
  CHECK(parse_researcher_name(html) == "Avery Quinlan");
}

TEST_CASE("blank cited-by cell counts as zero") {
  const auto g = testing::golden("mini");
  const auto html = corpus_file("mini", profile_page_url(g["user_id"].get<std::string>(), 0));
  const auto rows = parse_profile_rows(html);
  REQUIRE(rows.size() == 4);
  CHECK(rows[2].citation_count == 0);
  CHECK(rows[3].citation_count == 0);
}

TEST_CASE("profile pages without rows") {
  CHECK(parse_profile_rows("<table><tbody id='gsc_a_b'></tbody></table>").empty());
  CHECK_THROWS_AS(parse_profile_rows(corpus_file("broken_profile", profile_page_url("brokenPROFIL", 0))),
                  ParseFailure);
  try {
    parse_profile_rows("<html><body>redesigned</body></html>");
    FAIL("expected a parse failure");
  } catch (const ParseFailure& e) {
    CHECK(e.page_kind() == "profile page");
    CHECK(e.selector() == "tr.gsc_a_tr");
  }
  const auto empty = corpus_file("empty_profile", profile_page_url("emptyPROFILE", 0));
  CHECK(parse_profile_rows(empty).empty());
}

TEST_CASE("citing pages: three layouts agree") {
  const auto golden = json::parse(page("citing_golden.json"));
  const std::vector<std::pair<std::string, CardStrategy>> layouts{
      {"citing_strategy1.html", CardStrategy::container_class},
      {"citing_strategy2.html", CardStrategy::result_item},
      {"citing_strategy3.html", CardStrategy::title_meta_pair}};
  for (const auto& [file, strategy] : layouts) {
    INFO(file);
    const auto p = parse_citing_page(page(file));
    REQUIRE(p.strategy);
    CHECK(*p.strategy == strategy);
    CHECK(p.reported_total == std::optional<long>(4));
    REQUIRE(p.cards.size() == golden.size());
    for (std::size_t i = 0; i < golden.size(); ++i) {
      CHECK(p.cards[i].title == golden[i]["title"].get<std::string>());
      CHECK(p.cards[i].authors_raw == golden[i]["authors_raw"].get<std::string>());
      CHECK(p.cards[i].venue == golden[i]["venue"].get<std::string>());
      CHECK(p.cards[i].year == golden[i]["year"].get<std::string>());
      CHECK(p.cards[i].truncated_authors == golden[i]["truncated"].get<bool>());
    }
  }
}

TEST_CASE("citing pages: empty results and broken markup") {
  const auto empty = parse_citing_page(page("citing_empty.html"));
  CHECK(empty.empty_results);
  CHECK(empty.cards.empty());
  CHECK_THROWS_AS(parse_citing_page(page("citing_broken.html")), ParseFailure);
  CHECK(parse_citing_cards(page("citing_strategy1.html")).size() == 4);
}

TEST_CASE("cluster id from the detail page") {
  CHECK(extract_cluster_id(page("detail_cited.html")) == std::optional<std::string>("1234567890123456789"));
  CHECK_FALSE(extract_cluster_id(page("detail_uncited.html")));
  CHECK_FALSE(extract_cluster_id(page("detail_malformed.html")));
}
