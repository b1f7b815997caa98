#include "citescope/citation_collector.hpp"

#include <algorithm>

#include <json.hpp>

#include "citescope/similarity.hpp"
#include "citescope/text.hpp"
#include "citescope/url.hpp"

namespace citescope {

std::string_view to_string(AuthorSource s) {
  return s == AuthorSource::crossref ? "crossref" : "scholar";
}

std::optional<AuthorSource> author_source_from(std::string_view s) {
  if (s == "scholar") return AuthorSource::scholar;
  if (s == "crossref") return AuthorSource::crossref;
  return std::nullopt;
}

bool is_valid_scholar_id(std::string_view id) {
  if (id.size() != 12) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

std::string profile_page_url(std::string_view user_id, int cstart) {
  return url::build(std::string(kScholarOrigin) + "/citations",
                    {{"user", std::string(user_id)},
                     {"hl", "en"},
                     {"cstart", std::to_string(cstart)},
                     {"pagesize", std::to_string(kProfilePageSize)}});
}

std::string citing_page_url(std::string_view cluster_id, int start) {
  return url::build(std::string(kScholarOrigin) + "/scholar",
                    {{"hl", "en"}, {"cites", std::string(cluster_id)}, {"start", std::to_string(start)}});
}

std::string crossref_works_url(std::string_view title) {
  return url::build("https://api.crossref.org/works",
                    {{"query.bibliographic", std::string(title)}, {"rows", "1"}});
}

std::vector<std::string> split_scholar_authors(std::string_view authors_raw) {
  std::string s = text::trim(authors_raw);
  if (text::ends_with(s, "\xE2\x80\xA6")) {
    s.resize(s.size() - 3);
  } else if (text::ends_with(s, "...")) {
    s.resize(s.size() - 3);
  }
  return text::split_trimmed(s, ',');
}

std::optional<RegistryHit> parse_crossref_hit(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) return std::nullopt;
  if (!doc.is_object() || !doc.contains("message") || !doc["message"].is_object()) return std::nullopt;
  const auto& message = doc["message"];
  if (!message.contains("items")) return std::nullopt;
  const auto& items = message["items"];
  if (!items.is_array() || items.empty() || !items[0].is_object()) return std::nullopt;
  const auto& item = items[0];

  RegistryHit hit;
  if (const auto t = item.find("title"); t != item.end()) {
    if (t->is_array() && !t->empty() && (*t)[0].is_string()) {
      hit.title = (*t)[0].get<std::string>();
    } else if (t->is_string()) {
      hit.title = t->get<std::string>();
    }
  }
  if (const auto authors = item.find("author"); authors != item.end() && authors->is_array()) {
    for (const auto& a : *authors) {
      const auto given = text::trim(a.value("given", ""));
      const auto family = text::trim(a.value("family", ""));
      std::string name;
      if (!given.empty() && !family.empty()) {
        name = given + " " + family;
      } else if (!family.empty()) {
        name = family;
      } else {
        name = text::trim(a.value("name", ""));
      }
      if (name.empty()) continue;
      hit.authors.push_back(text::collapse_whitespace(name));
      std::string affiliation;
      if (const auto aff = a.find("affiliation");
          aff != a.end() && aff->is_array() && !aff->empty() && (*aff)[0].is_object()) {
        affiliation = text::trim((*aff)[0].value("name", ""));
      }
      hit.affiliations.push_back(std::move(affiliation));
    }
  }
  if (hit.title.empty()) return std::nullopt;
  return hit;
}

PublicationList CitationCollector::fetch_publications(const std::string& user_id) {
  if (!is_valid_scholar_id(user_id)) {
    throw std::invalid_argument("not a 12-character profile id: " + user_id);
  }
  PublicationList list;
  for (int cstart = 0;; cstart += kProfilePageSize) {
    const auto res = transport_.get(profile_page_url(user_id, cstart), HostPolicy::scholar());
    if (!res.ok()) {
      if (cstart == 0) {
        throw StageFailure("profile page unavailable (" + std::string(to_string(res.outcome)) +
                           "): " + res.diagnostic);
      }
      warnings_.push_back("profile page at offset " + std::to_string(cstart) +
                          " unavailable; publication list is incomplete");
      if (res.outcome == Outcome::rate_limited_skipped) ++skipped_pages_;
      list.incomplete = true;
      break;
    }

    std::vector<Publication> rows;
    if (cstart == 0) {
      rows = parse_profile_rows(res.body);  // ParseFailure propagates: stage 1 aborts
      list.researcher_name = parse_researcher_name(res.body);
    } else {
      try {
        rows = parse_profile_rows(res.body);
      } catch (const ParseFailure& e) {
        warnings_.push_back(e.what());
        list.incomplete = true;
        break;
      }
    }
    const auto n = rows.size();
    for (auto& r : rows) list.publications.push_back(std::move(r));
    if (n < static_cast<std::size_t>(kProfilePageSize)) break;
  }
  return list;
}

CitingPaper CitationCollector::skipped_marker(const Publication& pub) {
  ++skipped_pages_;
  CitingPaper marker;
  marker.cited_paper_title = pub.title;
  marker.skipped = true;
  return marker;
}

std::vector<CitingPaper> CitationCollector::collect_citing_papers(const Publication& pub) {
  if (pub.citation_count <= 0) {
    throw std::invalid_argument("uncited publication must not be fetched: " + pub.title);
  }
  std::vector<CitingPaper> out;

  const auto detail = transport_.get(url::resolve(kScholarOrigin, pub.detail_url), HostPolicy::scholar());
  if (!detail.ok()) {
    warnings_.push_back("detail page for \"" + pub.title + "\" unavailable: " + detail.diagnostic);
    out.push_back(skipped_marker(pub));
    return out;
  }
  const auto cluster = extract_cluster_id(detail.body);
  if (!cluster) {
    warnings_.push_back("no cited-by link on detail page for \"" + pub.title + "\"");
    return out;
  }

  for (int start = 0;; start += kCitingPageSize) {
    const auto res = transport_.get(citing_page_url(*cluster, start), HostPolicy::scholar());
    if (!res.ok()) {
      warnings_.push_back("citing page " + std::to_string(start) + " for \"" + pub.title +
                          "\" skipped: " + res.diagnostic);
      out.push_back(skipped_marker(pub));
      break;
    }
    CitingPage page;
    try {
      page = parse_citing_page(res.body);
    } catch (const ParseFailure& e) {
      warnings_.push_back(std::string(e.what()) + " (\"" + pub.title + "\", start " +
                          std::to_string(start) + ")");
      out.push_back(skipped_marker(pub));
      break;
    }
    if (page.empty_results) break;

    for (const auto& card : page.cards) {
      auto enriched = enrich_author_list(card);
      CitingPaper cp;
      cp.cited_paper_title = pub.title;
      cp.title = card.title;
      cp.authors = std::move(enriched.authors);
      cp.venue = card.venue;
      cp.year = card.year;
      cp.author_source = enriched.source;
      out.push_back(std::move(cp));
    }

    const bool short_page = page.cards.size() < static_cast<std::size_t>(kCitingPageSize);
    const bool past_total = page.reported_total && start + kCitingPageSize >= *page.reported_total;
    if (short_page || past_total) break;
  }
  return out;
}

std::optional<RegistryHit> CitationCollector::registry_lookup(const std::string& title) {
  if (auto it = registry_cache_.find(title); it != registry_cache_.end()) return it->second;
  std::optional<RegistryHit> hit;
  const auto res = transport_.get(crossref_works_url(title), HostPolicy::metadata_api());
  if (res.ok()) hit = parse_crossref_hit(res.body);
  registry_cache_.emplace(title, hit);
  return hit;
}

Enrichment CitationCollector::enrich_author_list(const CitingCard& card) {
  Enrichment e;
  e.authors = split_scholar_authors(card.authors_raw);
  if (!card.truncated_authors) return e;

  const auto hit = registry_lookup(card.title);
  if (!hit) return e;
  e.similarity = title_sim(card.title, hit->title);
  if (e.similarity >= kTitleMatchThreshold && !hit->authors.empty()) {
    e.authors = hit->authors;
    e.source = AuthorSource::crossref;
  }
  return e;
}

}  // namespace citescope
