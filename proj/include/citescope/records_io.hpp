#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "citescope/author_profiler.hpp"
#include "citescope/citation_collector.hpp"
#include "citescope/csv.hpp"
#include "citescope/reporting.hpp"

// Output-folder file schemas. Every table is UTF-8 CSV with a header row.
namespace citescope::records_io {

const csv::Row& papers_header();
const csv::Row& citing_papers_header();
const csv::Row& ranked_by_citations_header();
const csv::Row& ranked_by_hindex_header();

inline constexpr std::string_view kAuthorSeparator = "; ";

std::string papers_csv(const std::vector<Publication>& pubs);
std::string citing_papers_csv(const std::vector<CitingPaper>& papers);
std::string ranked_by_citations_csv(const std::vector<RankedAuthor>& rows);
std::string ranked_by_hindex_csv(const std::vector<RankedAuthor>& rows);

/// Inverses of the writers above; throw csv::CsvError on a header mismatch
/// or a malformed field.
std::vector<Publication> read_papers_csv(std::string_view document);
std::vector<CitingPaper> read_citing_papers_csv(std::string_view document);

std::string author_records_json(const std::vector<AuthorRecord>& records);
std::vector<AuthorRecord> read_author_records_json(std::string_view document);

}  // namespace citescope::records_io
