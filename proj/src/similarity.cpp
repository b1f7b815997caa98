#include "citescope/similarity.hpp"

#include <algorithm>

#include "citescope/text.hpp"

namespace citescope {

TokenSet TokenSet::from_text(std::string_view text) {
  TokenSet set;
  for (auto& w : text::words(text)) set.words_.insert(std::move(w));
  return set;
}

TokenSet TokenSet::without(const std::set<std::string, std::less<>>& stop_words) const {
  TokenSet out;
  for (const auto& w : words_) {
    if (stop_words.find(w) == stop_words.end()) out.words_.insert(w);
  }
  return out;
}

std::size_t TokenSet::intersection_size(const TokenSet& other) const {
  const auto& small = size() <= other.size() ? words_ : other.words_;
  const auto& large = size() <= other.size() ? other.words_ : words_;
  return static_cast<std::size_t>(std::count_if(
      small.begin(), small.end(), [&](const std::string& w) { return large.count(w) != 0; }));
}

const std::set<std::string, std::less<>>& institution_stop_words() {
  static const std::set<std::string, std::less<>> words = {
      "university", "of",       "the",        "institute", "college",  "school",
      "for",        "at",       "in",         "and",       "national", "center",
      "centre",     "lab",      "laboratory", "research",  "technology", "department"};
  return words;
}

double overlap_ratio(const TokenSet& a, const TokenSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  return static_cast<double>(a.intersection_size(b)) /
         static_cast<double>(std::max(a.size(), b.size()));
}

std::string primary_institution(std::string_view institution) {
  return text::trim(institution.substr(0, institution.find(',')));
}

double title_sim(std::string_view query_title, std::string_view candidate_title) {
  return overlap_ratio(TokenSet::from_text(query_title), TokenSet::from_text(candidate_title));
}

TokenSet inst_tokens(std::string_view name) {
  return TokenSet::from_text(primary_institution(name)).without(institution_stop_words());
}

double inst_sim(std::string_view a, std::string_view b) {
  return overlap_ratio(inst_tokens(a), inst_tokens(b));
}

double name_sim(std::string_view a, std::string_view b) {
  return overlap_ratio(TokenSet::from_text(a), TokenSet::from_text(b));
}

}  // namespace citescope
