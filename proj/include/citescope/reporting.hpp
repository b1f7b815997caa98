#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "citescope/author_profiler.hpp"
#include "citescope/citation_collector.hpp"
#include "citescope/disambiguator.hpp"

namespace citescope {

/// One row of either ranked table.
struct RankedAuthor {
  int rank = 0;
  std::string full_name;
  std::string institution;
  std::string country_code;
  int distinct_citing_papers = 0;
  std::optional<int> h_index;
  std::optional<HStatus> status;

  friend bool operator==(const RankedAuthor&, const RankedAuthor&) = default;
};

/// One person's record paired with their lookup outcome.
struct ResolvedAuthor {
  AuthorRecord record;
  HResolution resolution;
};

struct PaperCount {
  std::string title;
  int profile_count = 0;    // the profile page's cited-by number
  int collected_count = 0;  // citing papers actually gathered (skip markers excluded)

  friend bool operator==(const PaperCount&, const PaperCount&) = default;
};

struct SummaryStats {
  int unique_researchers = 0;
  int unique_countries = 0;
  int unique_institutions = 0;
  int unique_cities = 0;  // distinct (city, country) pairs
  std::vector<PaperCount> per_paper_citations;

  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

inline constexpr int kBarWidth = 40;

/// The record that speaks for a person in the tables: first one carrying an
/// author id, else the first with an institution, else the first.
/// Returns one record per distinct full_name, in order of first appearance.
std::vector<AuthorRecord> representative_records(const std::vector<AuthorRecord>& records);

/// Grouped by exact full_name; distinct citing_paper_title per group; count
/// descending, then name ascending.
std::vector<RankedAuthor> rank_by_citations(const std::vector<AuthorRecord>& records);

/// Accepted rows by h descending (name ascending on ties), then every rejected
/// row with h = 0 by name.
std::vector<RankedAuthor> rank_by_hindex(const std::vector<ResolvedAuthor>& resolutions);

/// `citing` is optional; when given, collected counts are filled in.
SummaryStats compute_summary(const std::vector<AuthorRecord>& records,
                             const std::vector<Publication>& publications,
                             const std::vector<CitingPaper>& citing = {});

/// Distinct researchers per country code (one vote per person), count
/// descending then code ascending. Records without a country are left out.
std::vector<std::pair<std::string, int>> country_counts(const std::vector<AuthorRecord>& records);

/// round(40 * count / max), at least 1 for nonzero counts.
int bar_length(int count, int max_count);

std::string render_summary_text(const SummaryStats& stats,
                                const std::vector<std::pair<std::string, int>>& country_counts,
                                const std::string& researcher_name = {});

}  // namespace citescope
