#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace citescope {

inline constexpr std::string_view kScholarOrigin = "https://scholar.google.com";

/// One row of the researcher's own publication list.
struct Publication {
  std::string title;
  std::string authors_raw;
  std::string venue;
  std::string year;  // "(19|20)dd" or empty
  int citation_count = 0;
  std::string detail_url;

  friend bool operator==(const Publication&, const Publication&) = default;
};

/// One citing-paper result card.
struct CitingCard {
  std::string title;
  std::string meta_raw;
  std::string authors_raw;
  std::string venue;
  std::string year;
  bool truncated_authors = false;

  friend bool operator==(const CitingCard&, const CitingCard&) = default;
};

struct MetaFields {
  std::string authors;
  std::string venue;
  std::string year;

  friend bool operator==(const MetaFields&, const MetaFields&) = default;
};

/// Raised when a page that should hold records yields none, which usually
/// means the markup changed. `selector` names what was looked for.
class ParseFailure : public std::runtime_error {
 public:
  ParseFailure(std::string page_kind, std::string selector)
      : std::runtime_error(page_kind + ": no elements matched " + selector),
        page_kind_(std::move(page_kind)),
        selector_(std::move(selector)) {}

  const std::string& page_kind() const { return page_kind_; }
  const std::string& selector() const { return selector_; }

 private:
  std::string page_kind_;
  std::string selector_;
};

/// Splits an "Authors - Venue, Year - Publisher" line. Non-breaking spaces and
/// en/em dashes are normalized first; the year is the last (19|20)dd match in
/// the venue segment so venue names that embed a year stay intact.
MetaFields parse_meta(std::string_view raw);

/// True when an author list ends with "…" or "...".
bool has_truncation_marker(std::string_view authors);

bool is_publication_year(std::string_view s);

std::vector<Publication> parse_profile_rows(std::string_view page_html);

/// Display name from the profile header, or empty.
std::string parse_researcher_name(std::string_view page_html);

enum class CardStrategy { container_class, result_item, title_meta_pair };

struct CitingPage {
  std::vector<CitingCard> cards;
  std::optional<CardStrategy> strategy;   // which selector produced the cards
  std::optional<long> reported_total;     // "About N results" header, when shown
  bool empty_results = false;
};

/// Parses one citing-results page, trying the three card selectors in order.
/// Throws ParseFailure when none matches on a page that is not the
/// empty-results page.
CitingPage parse_citing_page(std::string_view page_html);

std::vector<CitingCard> parse_citing_cards(std::string_view page_html);

/// Numeric cluster id from the detail page's "Cited by" link.
std::optional<std::string> extract_cluster_id(std::string_view detail_html);

}  // namespace citescope
