#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

namespace citescope {

/// A set of lowercase, punctuation-stripped words. Never holds empty strings.
class TokenSet {
 public:
  TokenSet() = default;

  static TokenSet from_text(std::string_view text);

  /// Copy of this set with every member of `stop_words` removed.
  TokenSet without(const std::set<std::string, std::less<>>& stop_words) const;

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool contains(std::string_view w) const { return words_.find(w) != words_.end(); }
  std::size_t intersection_size(const TokenSet& other) const;

  auto begin() const { return words_.begin(); }
  auto end() const { return words_.end(); }

  friend bool operator==(const TokenSet&, const TokenSet&) = default;

 private:
  std::set<std::string, std::less<>> words_;
};

/// The 18 non-discriminative institution words removed before comparison.
const std::set<std::string, std::less<>>& institution_stop_words();

/// |A ∩ B| / max(|A|, |B|), or 0 when either set is empty.
double overlap_ratio(const TokenSet& a, const TokenSet& b);

/// Text before the first comma, trimmed ("Texas Tech University, Dept of CS"
/// becomes "Texas Tech University").
std::string primary_institution(std::string_view institution);

double title_sim(std::string_view query_title, std::string_view candidate_title);

/// Words of the primary institution name minus the stop-word set.
TokenSet inst_tokens(std::string_view name);

double inst_sim(std::string_view a, std::string_view b);

double name_sim(std::string_view a, std::string_view b);

}  // namespace citescope
