#include "citescope/author_profiler.hpp"

#include <json.hpp>

#include "citescope/assets.hpp"
#include "citescope/citation_collector.hpp"
#include "citescope/similarity.hpp"
#include "citescope/text.hpp"
#include "citescope/url.hpp"

namespace citescope {

using nlohmann::json;

namespace {

constexpr std::string_view kOpenAlexWebPrefix = "https://openalex.org/";

std::string rewrite_openalex(std::string_view web_url, std::string_view collection) {
  if (!text::starts_with(web_url, kOpenAlexWebPrefix)) {
    const auto scheme_end = web_url.find("://");
    const auto host_end =
        scheme_end == std::string_view::npos ? web_url.size() : web_url.find('/', scheme_end + 3);
    throw InstitutionUrlError("unexpected entity URL prefix \"" +
                              std::string(web_url.substr(0, host_end == std::string_view::npos
                                                                ? web_url.size()
                                                                : host_end + 1)) +
                              "\" (expected " + std::string(kOpenAlexWebPrefix) + ")");
  }
  return "https://api.openalex.org/" + std::string(collection) + "/" +
         std::string(web_url.substr(kOpenAlexWebPrefix.size()));
}

std::string json_string(const json& j, const char* key) {
  const auto it = j.find(key);
  return it != j.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

json parse_json(const std::string& body) { return json::parse(body, nullptr, false); }

}  // namespace

std::string_view to_string(ProfileSource s) {
  switch (s) {
    case ProfileSource::openalex: return "openalex";
    case ProfileSource::semanticscholar: return "semanticscholar";
    case ProfileSource::crossref: return "crossref";
  }
  return "openalex";
}

std::optional<ProfileSource> profile_source_from(std::string_view s) {
  if (s == "openalex") return ProfileSource::openalex;
  if (s == "semanticscholar") return ProfileSource::semanticscholar;
  if (s == "crossref") return ProfileSource::crossref;
  return std::nullopt;
}

Blocklist parse_blocklist(std::string_view file_text) {
  Blocklist out;
  std::size_t start = 0;
  while (start < file_text.size()) {
    auto end = file_text.find('\n', start);
    if (end == std::string_view::npos) end = file_text.size();
    auto line = file_text.substr(start, end - start);
    line = line.substr(0, line.find('#'));
    auto term = text::to_lower(text::trim(line));
    if (!term.empty()) out.insert(std::move(term));
    start = end + 1;
  }
  return out;
}

const Blocklist& default_org_blocklist() {
  static const Blocklist list = parse_blocklist(assets::org_blocklist_txt());
  return list;
}

bool is_person(std::string_view display_name, const Blocklist& blocklist) {
  if (text::trim(display_name).empty()) return false;
  if (text::contains_digit(display_name)) return false;
  for (const auto& w : text::words(display_name)) {
    if (blocklist.count(w)) return false;
  }
  return true;
}

std::string institution_api_url(std::string_view web_url) {
  return rewrite_openalex(web_url, "institutions");
}

std::string author_api_url(std::string_view web_url) { return rewrite_openalex(web_url, "authors"); }

std::string openalex_works_url(std::string_view title, std::string_view mailto) {
  url::QueryParams q{{"search", std::string(title)}, {"per-page", "1"}};
  if (!mailto.empty()) q.emplace_back("mailto", std::string(mailto));
  return url::build("https://api.openalex.org/works", q);
}

std::string semantic_scholar_search_url(std::string_view title) {
  return url::build("https://api.semanticscholar.org/graph/v1/paper/search",
                    {{"query", std::string(title)},
                     {"limit", "1"},
                     {"fields", "title,authors.name,authors.affiliations"}});
}

void AuthorProfiler::keep_if_person(PaperResolution& res, AuthorRecord rec) const {
  rec.full_name = text::collapse_whitespace(rec.full_name);
  if (!is_person(rec.full_name, options_.blocklist)) {
    ++res.rejected_names;
    return;
  }
  res.records.push_back(std::move(rec));
}

std::optional<PaperResolution> AuthorProfiler::try_openalex(const std::string& title) {
  const auto resp = transport_.get(openalex_works_url(title, options_.mailto), HostPolicy::metadata_api());
  if (!resp.ok()) return std::nullopt;
  const auto doc = parse_json(resp.body);
  if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array() ||
      doc["results"].empty())
    return std::nullopt;
  const auto& work = doc["results"][0];
  auto hit_title = json_string(work, "display_name");
  if (hit_title.empty()) hit_title = json_string(work, "title");
  if (title_sim(title, hit_title) < kTitleMatchThreshold) return std::nullopt;

  PaperResolution res;
  res.source = ProfileSource::openalex;
  if (!work.contains("authorships") || !work["authorships"].is_array()) return res;
  for (const auto& authorship : work["authorships"]) {
    if (!authorship.is_object() || !authorship.contains("author")) continue;
    const auto& author = authorship["author"];
    AuthorRecord rec;
    rec.full_name = json_string(author, "display_name");
    rec.author_entity_id = json_string(author, "id");
    rec.citing_paper_title = title;
    rec.source = ProfileSource::openalex;
    if (authorship.contains("institutions") && authorship["institutions"].is_array() &&
        !authorship["institutions"].empty()) {
      const auto& inst = authorship["institutions"][0];
      rec.institution = json_string(inst, "display_name");
      rec.country_code = json_string(inst, "country_code");
      rec.institution_entity_id = json_string(inst, "id");
    }
    if (rec.country_code.empty() && authorship.contains("countries") &&
        authorship["countries"].is_array() && !authorship["countries"].empty() &&
        authorship["countries"][0].is_string()) {
      rec.country_code = authorship["countries"][0].get<std::string>();
    }
    keep_if_person(res, std::move(rec));
  }
  for (auto& rec : res.records) {
    if (!rec.institution_entity_id.empty()) rec.city = resolve_institution_city(rec.institution_entity_id);
  }
  return res;
}

std::optional<PaperResolution> AuthorProfiler::try_semantic_scholar(const std::string& title) {
  const auto resp = transport_.get(semantic_scholar_search_url(title), HostPolicy::metadata_api());
  if (!resp.ok()) return std::nullopt;
  const auto doc = parse_json(resp.body);
  if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_array() || doc["data"].empty())
    return std::nullopt;
  const auto& paper = doc["data"][0];
  if (title_sim(title, json_string(paper, "title")) < kTitleMatchThreshold) return std::nullopt;

  PaperResolution res;
  res.source = ProfileSource::semanticscholar;
  if (!paper.contains("authors") || !paper["authors"].is_array()) return res;
  for (const auto& author : paper["authors"]) {
    if (!author.is_object()) continue;
    AuthorRecord rec;
    rec.full_name = json_string(author, "name");
    rec.citing_paper_title = title;
    rec.source = ProfileSource::semanticscholar;
    if (author.contains("affiliations") && author["affiliations"].is_array() &&
        !author["affiliations"].empty() && author["affiliations"][0].is_string()) {
      rec.institution = text::trim(author["affiliations"][0].get<std::string>());
    }
    keep_if_person(res, std::move(rec));
  }
  return res;
}

std::optional<PaperResolution> AuthorProfiler::try_crossref(const std::string& title) {
  const auto resp = transport_.get(crossref_works_url(title), HostPolicy::metadata_api());
  if (!resp.ok()) return std::nullopt;
  const auto hit = parse_crossref_hit(resp.body);
  if (!hit || title_sim(title, hit->title) < kTitleMatchThreshold) return std::nullopt;

  PaperResolution res;
  res.source = ProfileSource::crossref;
  for (std::size_t i = 0; i < hit->authors.size(); ++i) {
    AuthorRecord rec;
    rec.full_name = hit->authors[i];
    rec.citing_paper_title = title;
    rec.institution = hit->affiliations[i];
    rec.source = ProfileSource::crossref;
    keep_if_person(res, std::move(rec));
  }
  return res;
}

PaperResolution AuthorProfiler::resolve_paper_authors(const std::string& title) {
  if (title.empty()) throw std::invalid_argument("resolve_paper_authors: empty title");
  if (auto r = try_openalex(title)) return std::move(*r);
  if (auto r = try_semantic_scholar(title)) return std::move(*r);
  if (auto r = try_crossref(title)) return std::move(*r);
  return {};
}

std::string AuthorProfiler::resolve_institution_city(const std::string& inst_id) {
  if (auto it = city_cache_.find(inst_id); it != city_cache_.end()) return it->second;

  std::string city;
  try {
    auto api = institution_api_url(inst_id);
    if (!options_.mailto.empty()) api = url::build(api, {{"mailto", options_.mailto}});
    ++institution_fetches_;
    const auto resp = transport_.get(api, HostPolicy::metadata_api());
    if (resp.ok()) {
      const auto doc = parse_json(resp.body);
      if (doc.is_object() && doc.contains("geo") && doc["geo"].is_object()) {
        city = text::trim(json_string(doc["geo"], "city"));
      }
    }
  } catch (const InstitutionUrlError&) {
    // Not an entity we know how to query; remember the miss.
  }
  city_cache_.emplace(inst_id, city);
  return city;
}

}  // namespace citescope
