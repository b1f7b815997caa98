#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/transport.hpp"

namespace citescope {

enum class ProfileSource { openalex, semanticscholar, crossref };

std::string_view to_string(ProfileSource s);
std::optional<ProfileSource> profile_source_from(std::string_view s);

/// One (person, citing paper) pairing.
struct AuthorRecord {
  std::string full_name;
  std::string citing_paper_title;
  std::string institution;
  std::string country_code;
  std::string city;  // only ever set from a resolved institution entity
  std::string author_entity_id;
  std::string institution_entity_id;
  ProfileSource source = ProfileSource::openalex;

  friend bool operator==(const AuthorRecord&, const AuthorRecord&) = default;
};

using Blocklist = std::set<std::string, std::less<>>;

/// Terms from a blocklist file: one per line, '#' starts a comment,
/// lowercased, blank lines ignored.
Blocklist parse_blocklist(std::string_view file_text);

/// The shipped organisational keyword list (config/org_blocklist.txt).
const Blocklist& default_org_blocklist();

/// False when any word of the name is blocklisted or the name has a digit.
bool is_person(std::string_view display_name, const Blocklist& blocklist = default_org_blocklist());

class InstitutionUrlError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "https://openalex.org/I123" -> "https://api.openalex.org/institutions/I123".
/// Any other prefix throws InstitutionUrlError naming it.
std::string institution_api_url(std::string_view web_url);

/// Same rewrite for author entities ("/authors/").
std::string author_api_url(std::string_view web_url);

std::string openalex_works_url(std::string_view title, std::string_view mailto);
std::string semantic_scholar_search_url(std::string_view title);

struct ProfilerOptions {
  std::string mailto;  // polite-pool contact; omitted from URLs when empty
  Blocklist blocklist = default_org_blocklist();
};

struct PaperResolution {
  std::vector<AuthorRecord> records;
  std::optional<ProfileSource> source;  // nullopt: every source missed
  int rejected_names = 0;               // dropped by the person filter
};

/// Three-source author resolution for citing papers with a per-run
/// institution-city cache.
class AuthorProfiler {
 public:
  AuthorProfiler(Transport& transport, ProfilerOptions options)
      : transport_(transport), options_(std::move(options)) {}

  /// Tries the primary works index, then the paper-search graph, then the DOI
  /// registry; the first hit passing the title guard wins.
  PaperResolution resolve_paper_authors(const std::string& title);

  /// City for an institution entity; fetched at most once per id per run,
  /// failures cached as "".
  std::string resolve_institution_city(const std::string& inst_id);

  std::size_t institution_fetches() const { return institution_fetches_; }

 private:
  std::optional<PaperResolution> try_openalex(const std::string& title);
  std::optional<PaperResolution> try_semantic_scholar(const std::string& title);
  std::optional<PaperResolution> try_crossref(const std::string& title);
  void keep_if_person(PaperResolution& res, AuthorRecord rec) const;

  Transport& transport_;
  ProfilerOptions options_;
  std::map<std::string, std::string, std::less<>> city_cache_;
  std::size_t institution_fetches_ = 0;
};

}  // namespace citescope
