#include "citescope/disambiguator.hpp"

#include <algorithm>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "citescope/author_profiler.hpp"
#include "citescope/similarity.hpp"
#include "citescope/text.hpp"
#include "citescope/url.hpp"

namespace citescope {

using nlohmann::json;

std::string_view to_string(HStatus s) {
  switch (s) {
    case HStatus::direct: return "direct";
    case HStatus::accepted: return "accepted";
    case HStatus::id_mismatch: return "id_mismatch";
    case HStatus::name_mismatch: return "name_mismatch";
    case HStatus::not_found: return "not_found";
    case HStatus::h_cap_exceeded: return "h_cap_exceeded";
  }
  return "not_found";
}

std::optional<HStatus> h_status_from(std::string_view s) {
  for (auto st : {HStatus::direct, HStatus::accepted, HStatus::id_mismatch, HStatus::name_mismatch,
                  HStatus::not_found, HStatus::h_cap_exceeded}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

bool is_accepting(HStatus s) { return s == HStatus::direct || s == HStatus::accepted; }

HResolution HResolution::accept(int h, HStatus how) {
  if (!is_accepting(how)) throw std::logic_error("accept() with a rejecting status");
  return {std::max(h, 0), how};
}

HResolution HResolution::reject(HStatus why) {
  if (is_accepting(why)) throw std::logic_error("reject() with an accepting status");
  return {0, why};
}

Scorers Scorers::word_overlap() {
  return {[](std::string_view a, std::string_view b) { return citescope::name_sim(a, b); },
          [](std::string_view a, std::string_view b) { return citescope::inst_sim(a, b); }};
}

double candidate_inst_sim(std::string_view institution, const CandidateAuthor& candidate,
                          const Scorers& scorers) {
  const auto primary = primary_institution(institution);
  double best = 0.0;
  for (const auto& h : candidate.affiliation_history) best = std::max(best, scorers.inst_sim(primary, h));
  return best;
}

bool affiliation_confirmed(std::string_view institution, const CandidateAuthor& candidate,
                           const Scorers& scorers) {
  return candidate_inst_sim(institution, candidate, scorers) >= kAffiliationTau;
}

namespace {

HResolution capped(int h, HStatus accepting_status) {
  return h <= kUnknownInstitutionHCap ? HResolution::accept(h, accepting_status)
                                      : HResolution::reject(HStatus::h_cap_exceeded);
}

}  // namespace

HResolution resolve_h_index(const std::string& full_name, const std::string& institution,
                            const std::string& author_entity_id, CandidateSource& lookup,
                            const Scorers& scorers) {
  if (text::trim(full_name).empty()) throw std::invalid_argument("resolve_h_index: empty name");
  const bool institution_known = !text::trim(institution).empty();

  if (!author_entity_id.empty()) {
    std::optional<CandidateAuthor> record;
    try {
      record = lookup.fetch_by_id(author_entity_id);
    } catch (const CandidateSourceError& e) {
      std::cerr << "warning: author lookup for " << full_name << " failed: " << e.what() << "\n";
      return HResolution::reject(HStatus::not_found);
    }
    const bool valid = record && record->h_index && !text::trim(record->name).empty();
    if (!valid) return HResolution::reject(HStatus::id_mismatch);
    if (!institution_known || record->affiliation_history.empty()) {
      return capped(*record->h_index, HStatus::direct);
    }
    if (affiliation_confirmed(institution, *record, scorers)) {
      return HResolution::accept(*record->h_index, HStatus::direct);
    }
    return HResolution::reject(HStatus::id_mismatch);
  }

  std::vector<CandidateAuthor> candidates;
  try {
    candidates = lookup.search_by_name(full_name, kSearchTopK);
  } catch (const CandidateSourceError& e) {
    std::cerr << "warning: author search for " << full_name << " failed: " << e.what() << "\n";
    return HResolution::reject(HStatus::not_found);
  }

  const CandidateAuthor* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_name_sim = 0.0;
  for (const auto& c : candidates) {
    if (!c.h_index) continue;
    const double ns = scorers.name_sim(full_name, c.name);
    if (ns < kNameSimFloor) continue;
    const double is = candidate_inst_sim(institution, c, scorers);
    if (institution_known && is < kInstSimFloor) continue;
    const double score = ns + kInstSimWeight * is;
    const bool better =
        score > best_score ||
        (score == best_score &&
         (ns > best_name_sim || (ns == best_name_sim && best && c.entity_id < best->entity_id)));
    if (better) {
      best = &c;
      best_score = score;
      best_name_sim = ns;
    }
  }
  if (!best) return HResolution::reject(HStatus::not_found);
  if (!institution_known) return capped(*best->h_index, HStatus::accepted);
  if (!affiliation_confirmed(institution, *best, scorers)) return HResolution::reject(HStatus::name_mismatch);
  return HResolution::accept(*best->h_index, HStatus::accepted);
}

CandidateAuthor parse_openalex_author(const std::string& json_object_text) {
  const auto j = json::parse(json_object_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw CandidateSourceError("author record is not a JSON object");

  CandidateAuthor c;
  c.name = j.value("display_name", "");
  c.entity_id = j.value("id", "");
  if (const auto s = j.find("summary_stats"); s != j.end() && s->is_object()) {
    if (const auto h = s->find("h_index"); h != s->end() && h->is_number_integer()) c.h_index = h->get<int>();
  }

  auto add = [&](const json& inst) {
    if (!inst.is_object()) return;
    auto name = text::trim(inst.value("display_name", ""));
    if (name.empty()) return;
    if (std::find(c.affiliation_history.begin(), c.affiliation_history.end(), name) ==
        c.affiliation_history.end())
      c.affiliation_history.push_back(std::move(name));
  };
  if (const auto a = j.find("affiliations"); a != j.end() && a->is_array()) {
    for (const auto& entry : *a) {
      if (entry.is_object() && entry.contains("institution")) add(entry["institution"]);
    }
  }
  if (const auto l = j.find("last_known_institutions"); l != j.end() && l->is_array()) {
    for (const auto& inst : *l) add(inst);
  }
  if (const auto l = j.find("last_known_institution"); l != j.end()) add(*l);
  return c;
}

std::string openalex_author_search_url(std::string_view name, int top_k, std::string_view mailto) {
  url::QueryParams q{{"search", std::string(name)}, {"per-page", std::to_string(top_k)}};
  if (!mailto.empty()) q.emplace_back("mailto", std::string(mailto));
  return url::build("https://api.openalex.org/authors", q);
}

std::optional<CandidateAuthor> OpenAlexCandidateSource::fetch_by_id(const std::string& entity_id) {
  std::string api;
  if (entity_id.find("://") == std::string::npos) {
    api = "https://api.openalex.org/authors/" + entity_id;
  } else {
    try {
      api = author_api_url(entity_id);
    } catch (const InstitutionUrlError& e) {
      throw CandidateSourceError(e.what());
    }
  }
  if (!mailto_.empty()) api = url::build(api, {{"mailto", mailto_}});

  const auto resp = transport_.get(api, HostPolicy::metadata_api());
  if (resp.status == 404) return std::nullopt;
  if (!resp.ok()) throw CandidateSourceError(resp.diagnostic);
  return parse_openalex_author(resp.body);
}

std::vector<CandidateAuthor> OpenAlexCandidateSource::search_by_name(const std::string& name, int top_k) {
  const auto resp = transport_.get(openalex_author_search_url(name, top_k, mailto_), HostPolicy::metadata_api());
  if (!resp.ok()) throw CandidateSourceError(resp.diagnostic);
  const auto doc = json::parse(resp.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CandidateSourceError("author search: malformed JSON");
  std::vector<CandidateAuthor> out;
  if (const auto r = doc.find("results"); r != doc.end() && r->is_array()) {
    for (const auto& item : *r) {
      if (static_cast<int>(out.size()) >= top_k) break;
      out.push_back(parse_openalex_author(item.dump()));
    }
  }
  return out;
}

}  // namespace citescope
