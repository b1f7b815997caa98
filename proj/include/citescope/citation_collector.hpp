#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/scholar_parser.hpp"
#include "citescope/transport.hpp"

namespace citescope {

enum class AuthorSource { scholar, crossref };

std::string_view to_string(AuthorSource s);
std::optional<AuthorSource> author_source_from(std::string_view s);

/// One paper citing one of the researcher's publications. A row with
/// `skipped` set marks a rate-limited page; its other fields are empty.
struct CitingPaper {
  std::string cited_paper_title;
  std::string title;
  std::vector<std::string> authors;
  std::string venue;
  std::string year;
  AuthorSource author_source = AuthorSource::scholar;
  bool skipped = false;

  friend bool operator==(const CitingPaper&, const CitingPaper&) = default;
};

struct PublicationList {
  std::string researcher_name;
  std::vector<Publication> publications;
  bool incomplete = false;  // a later page was rate-limited or unparseable
};

struct Enrichment {
  std::vector<std::string> authors;
  AuthorSource source = AuthorSource::scholar;
  double similarity = 0.0;  // title_sim of the accepted (or rejected) registry hit
};

/// Stage 1 could not produce a publication list at all.
class StageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kTitleMatchThreshold = 0.5;
inline constexpr int kProfilePageSize = 100;
inline constexpr int kCitingPageSize = 10;

/// 12 characters of [A-Za-z0-9_-].
bool is_valid_scholar_id(std::string_view id);

std::string profile_page_url(std::string_view user_id, int cstart);
std::string citing_page_url(std::string_view cluster_id, int start);
std::string crossref_works_url(std::string_view title);

/// "A Smith, B Jones, C Lee…" -> {"A Smith", "B Jones", "C Lee"}.
std::vector<std::string> split_scholar_authors(std::string_view authors_raw);

/// Given/family pairs from a registry works-search response, plus the hit's
/// title. Returns nullopt when the response has no usable item.
struct RegistryHit {
  std::string title;
  std::vector<std::string> authors;
  std::vector<std::string> affiliations;  // parallel to authors, "" when absent
};
std::optional<RegistryHit> parse_crossref_hit(std::string_view body);

/// Profile traversal, cited-by pagination and author-list enrichment.
/// Sequential; all traffic goes through the shared transport.
class CitationCollector {
 public:
  explicit CitationCollector(Transport& transport) : transport_(transport) {}

  /// Pages the profile 100 rows at a time until a short page.
  /// Throws StageFailure/ParseFailure when the first page is unusable.
  PublicationList fetch_publications(const std::string& user_id);

  /// Requires pub.citation_count > 0.
  std::vector<CitingPaper> collect_citing_papers(const Publication& pub);

  /// Replaces a truncated author list with the registry's full list when the
  /// registry's top hit passes the title guard. Untruncated cards pass through.
  Enrichment enrich_author_list(const CitingCard& card);

  int skipped_pages() const { return skipped_pages_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::optional<RegistryHit> registry_lookup(const std::string& title);
  CitingPaper skipped_marker(const Publication& pub);

  Transport& transport_;
  std::map<std::string, std::optional<RegistryHit>> registry_cache_;
  int skipped_pages_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace citescope
