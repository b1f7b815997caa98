#include <doctest.h>

#include "citescope/records_io.hpp"

using namespace citescope;
using namespace citescope::records_io;

TEST_CASE("papers round-trip") {
  const std::vector<Publication> pubs{{"A, \"quoted\" title", "X Y, Z W", "Venue", "2020", 12, "https://s/x?a=1&b=2"},
                                      {"Second", "", "", "", 0, ""}};
  const auto doc = papers_csv(pubs);
  CHECK(doc.rfind("title,authors,venue,year,citation_count,detail_url\r\n", 0) == 0);
  CHECK(read_papers_csv(doc) == pubs);
  CHECK(papers_csv({}) == "title,authors,venue,year,citation_count,detail_url\r\n");
  CHECK(read_papers_csv(papers_csv({})).empty());
  CHECK_THROWS_AS(read_papers_csv("a,b\r\n"), csv::CsvError);
  CHECK_THROWS_AS(read_papers_csv("title,authors,venue,year,citation_count,detail_url\r\nt,a,v,y,notanumber,u\r\n"),
                  csv::CsvError);
}

TEST_CASE("citing papers round-trip, skip markers included") {
  CitingPaper a{"Cited", "Citing", {"A One", "B Two"}, "V", "2021", AuthorSource::crossref, false};
  CitingPaper skip;
  skip.cited_paper_title = "Cited";
  skip.skipped = true;
  const auto doc = citing_papers_csv({a, skip});
  CHECK(doc.find("A One; B Two") != std::string::npos);
  CHECK(doc.find(",scholar,true\r\n") != std::string::npos);
  CHECK(read_citing_papers_csv(doc) == std::vector<CitingPaper>{a, skip});
  CHECK_THROWS_AS(read_citing_papers_csv(
                      "cited_paper_title,citing_title,citing_authors,venue,year,author_source,skipped\r\n"
                      "a,b,c,d,e,elsewhere,false\r\n"),
                  csv::CsvError);
}

TEST_CASE("ranked tables") {
  RankedAuthor r{1, "Jane Roe", "MIT", "US", 4, 17, HStatus::direct};
  CHECK(ranked_by_citations_csv({r}) ==
        "rank,full_name,institution,country_code,distinct_citing_papers\r\n1,Jane Roe,MIT,US,4\r\n");
  CHECK(ranked_by_hindex_csv({r}) ==
        "rank,full_name,institution,country_code,h_index,status\r\n1,Jane Roe,MIT,US,17,direct\r\n");
}

TEST_CASE("author records json round-trip") {
  AuthorRecord r;
  r.full_name = "Zo\xC3\xAB M\xC3\xBCller";
  r.citing_paper_title = "T";
  r.institution = "TUM";
  r.country_code = "DE";
  r.city = "Munich";
  r.author_entity_id = "https://openalex.org/A1";
  r.institution_entity_id = "https://openalex.org/I1";
  r.source = ProfileSource::semanticscholar;
  const std::vector<AuthorRecord> rs{r, AuthorRecord{}};
  CHECK(read_author_records_json(author_records_json(rs)) == rs);
  CHECK(read_author_records_json("[]").empty());
  CHECK_THROWS(read_author_records_json("{"));
}
