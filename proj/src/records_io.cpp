#include "citescope/records_io.hpp"

#include <charconv>

#include <json.hpp>

#include "citescope/text.hpp"

namespace citescope::records_io {

namespace {

std::vector<csv::Row> body_rows(std::string_view document, const csv::Row& header, const char* what) {
  auto rows = csv::parse(document);
  if (rows.empty() || rows.front() != header) throw csv::CsvError(std::string(what) + ": unexpected header");
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.size() != header.size())
      throw csv::CsvError(std::string(what) + ": row with " + std::to_string(r.size()) + " fields");
  }
  return rows;
}

int to_int(const std::string& s, const char* what) {
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw csv::CsvError(std::string(what) + ": bad integer \"" + s + "\"");
  return v;
}

}  // namespace

const csv::Row& papers_header() {
  static const csv::Row h{"title", "authors", "venue", "year", "citation_count", "detail_url"};
  return h;
}

const csv::Row& citing_papers_header() {
  static const csv::Row h{"cited_paper_title", "citing_title", "citing_authors", "venue",
                          "year",              "author_source", "skipped"};
  return h;
}

const csv::Row& ranked_by_citations_header() {
  static const csv::Row h{"rank", "full_name", "institution", "country_code", "distinct_citing_papers"};
  return h;
}

const csv::Row& ranked_by_hindex_header() {
  static const csv::Row h{"rank", "full_name", "institution", "country_code", "h_index", "status"};
  return h;
}

std::string papers_csv(const std::vector<Publication>& pubs) {
  std::vector<csv::Row> rows;
  for (const auto& p : pubs)
    rows.push_back({p.title, p.authors_raw, p.venue, p.year, std::to_string(p.citation_count), p.detail_url});
  return csv::format(papers_header(), rows);
}

std::string citing_papers_csv(const std::vector<CitingPaper>& papers) {
  std::vector<csv::Row> rows;
  for (const auto& c : papers) {
    rows.push_back({c.cited_paper_title, c.title, text::join(c.authors, kAuthorSeparator), c.venue, c.year,
                    std::string(to_string(c.author_source)), c.skipped ? "true" : "false"});
  }
  return csv::format(citing_papers_header(), rows);
}

std::string ranked_by_citations_csv(const std::vector<RankedAuthor>& rows) {
  std::vector<csv::Row> out;
  for (const auto& r : rows) {
    out.push_back({std::to_string(r.rank), r.full_name, r.institution, r.country_code,
                   std::to_string(r.distinct_citing_papers)});
  }
  return csv::format(ranked_by_citations_header(), out);
}

std::string ranked_by_hindex_csv(const std::vector<RankedAuthor>& rows) {
  std::vector<csv::Row> out;
  for (const auto& r : rows) {
    out.push_back({std::to_string(r.rank), r.full_name, r.institution, r.country_code,
                   r.h_index ? std::to_string(*r.h_index) : "",
                   r.status ? std::string(to_string(*r.status)) : ""});
  }
  return csv::format(ranked_by_hindex_header(), out);
}

std::vector<Publication> read_papers_csv(std::string_view document) {
  std::vector<Publication> out;
  for (auto& r : body_rows(document, papers_header(), "papers.csv")) {
    out.push_back({r[0], r[1], r[2], r[3], to_int(r[4], "papers.csv"), r[5]});
  }
  return out;
}

std::vector<CitingPaper> read_citing_papers_csv(std::string_view document) {
  std::vector<CitingPaper> out;
  for (auto& r : body_rows(document, citing_papers_header(), "citing_papers.csv")) {
    CitingPaper c;
    c.cited_paper_title = r[0];
    c.title = r[1];
    std::size_t start = 0;
    const std::string& joined = r[2];
    while (!joined.empty() && start <= joined.size()) {
      auto end = joined.find(kAuthorSeparator, start);
      if (end == std::string::npos) end = joined.size();
      c.authors.push_back(joined.substr(start, end - start));
      start = end + kAuthorSeparator.size();
    }
    c.venue = r[3];
    c.year = r[4];
    const auto src = author_source_from(r[5]);
    if (!src) throw csv::CsvError("citing_papers.csv: unknown author_source \"" + r[5] + "\"");
    c.author_source = *src;
    if (r[6] != "true" && r[6] != "false") throw csv::CsvError("citing_papers.csv: bad skipped flag");
    c.skipped = r[6] == "true";
    out.push_back(std::move(c));
  }
  return out;
}

std::string author_records_json(const std::vector<AuthorRecord>& records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"full_name", r.full_name},
                   {"citing_paper_title", r.citing_paper_title},
                   {"institution", r.institution},
                   {"country_code", r.country_code},
                   {"city", r.city},
                   {"author_entity_id", r.author_entity_id},
                   {"institution_entity_id", r.institution_entity_id},
                   {"source", std::string(to_string(r.source))}});
  }
  return arr.dump(1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::vector<AuthorRecord> read_author_records_json(std::string_view document) {
  const auto arr = nlohmann::json::parse(document);
  if (!arr.is_array()) throw std::runtime_error("author records: expected an array");
  std::vector<AuthorRecord> out;
  for (const auto& o : arr) {
    AuthorRecord r;
    r.full_name = o.at("full_name").get<std::string>();
    r.citing_paper_title = o.at("citing_paper_title").get<std::string>();
    r.institution = o.at("institution").get<std::string>();
    r.country_code = o.at("country_code").get<std::string>();
    r.city = o.at("city").get<std::string>();
    r.author_entity_id = o.at("author_entity_id").get<std::string>();
    r.institution_entity_id = o.at("institution_entity_id").get<std::string>();
    const auto src = profile_source_from(o.at("source").get<std::string>());
    if (!src) throw std::runtime_error("author records: unknown source");
    r.source = *src;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace citescope::records_io
