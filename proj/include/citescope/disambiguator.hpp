#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/transport.hpp"

namespace citescope {

/// An author entity returned by the h-index service.
struct CandidateAuthor {
  std::string name;
  std::optional<int> h_index;  // absent when the record carries no summary
  std::vector<std::string> affiliation_history;
  std::string entity_id;
};

enum class HStatus { direct, accepted, id_mismatch, name_mismatch, not_found, h_cap_exceeded };

std::string_view to_string(HStatus s);
std::optional<HStatus> h_status_from(std::string_view s);
bool is_accepting(HStatus s);

/// Outcome of one lookup. Non-accepting statuses always carry h_index 0.
class HResolution {
 public:
  static HResolution accept(int h, HStatus how);
  static HResolution reject(HStatus why);

  int h_index() const { return h_index_; }
  HStatus status() const { return status_; }

  friend bool operator==(const HResolution&, const HResolution&) = default;

 private:
  HResolution(int h, HStatus s) : h_index_(h), status_(s) {}
  int h_index_;
  HStatus status_;
};

/// Lookup service. Implementations throw CandidateSourceError on transport
/// or decoding failure.
class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  virtual std::optional<CandidateAuthor> fetch_by_id(const std::string& entity_id) = 0;
  virtual std::vector<CandidateAuthor> search_by_name(const std::string& name, int top_k) = 0;
};

class CandidateSourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kNameSimFloor = 0.7;
inline constexpr double kInstSimFloor = 0.4;
inline constexpr double kAffiliationTau = 0.6;
inline constexpr double kInstSimWeight = 0.5;
inline constexpr int kUnknownInstitutionHCap = 20;
inline constexpr int kSearchTopK = 5;

/// The two similarity measures the decision procedure consumes. Defaults are
/// the word-overlap measures; tests substitute tables to pin exact values.
struct Scorers {
  std::function<double(std::string_view, std::string_view)> name_sim;
  std::function<double(std::string_view, std::string_view)> inst_sim;

  static Scorers word_overlap();
};

/// Best inst_sim between the recorded institution and any history entry.
double candidate_inst_sim(std::string_view institution, const CandidateAuthor& candidate,
                          const Scorers& scorers = Scorers::word_overlap());

/// True iff some history entry reaches tau = 0.6 against the primary
/// (pre-comma) institution name.
bool affiliation_confirmed(std::string_view institution, const CandidateAuthor& candidate,
                           const Scorers& scorers = Scorers::word_overlap());

/// Two-stage resolution: trust a persisted author id only when its affiliation
/// history confirms the recorded institution; otherwise search by name, filter
/// on name and institution similarity, score, and confirm the winner. With no
/// recorded institution, h-indices above 20 are refused.
HResolution resolve_h_index(const std::string& full_name, const std::string& institution,
                            const std::string& author_entity_id, CandidateSource& lookup,
                            const Scorers& scorers = Scorers::word_overlap());

/// Author lookups against the primary metadata index.
class OpenAlexCandidateSource final : public CandidateSource {
 public:
  OpenAlexCandidateSource(Transport& transport, std::string mailto)
      : transport_(transport), mailto_(std::move(mailto)) {}

  std::optional<CandidateAuthor> fetch_by_id(const std::string& entity_id) override;
  std::vector<CandidateAuthor> search_by_name(const std::string& name, int top_k) override;

 private:
  Transport& transport_;
  std::string mailto_;
};

/// Decodes one author object (summary_stats.h_index, affiliations,
/// last_known_institutions).
CandidateAuthor parse_openalex_author(const std::string& json_object_text);

std::string openalex_author_search_url(std::string_view name, int top_k, std::string_view mailto);

}  // namespace citescope
