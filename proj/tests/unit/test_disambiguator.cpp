#include <doctest.h>

#include <random>

#include "citescope/disambiguator.hpp"
#include "support.hpp"

using namespace citescope;

namespace {

class FakeSource final : public CandidateSource {
 public:
  std::map<std::string, std::optional<CandidateAuthor>> by_id;
  std::vector<CandidateAuthor> candidates;
  bool fail = false;
  int id_calls = 0, search_calls = 0;

  std::optional<CandidateAuthor> fetch_by_id(const std::string& id) override {
    ++id_calls;
    if (fail) throw CandidateSourceError("down");
    auto it = by_id.find(id);
    return it == by_id.end() ? std::nullopt : it->second;
  }
  std::vector<CandidateAuthor> search_by_name(const std::string&, int top_k) override {
    ++search_calls;
    if (fail) throw CandidateSourceError("down");
    std::vector<CandidateAuthor> out(candidates.begin(),
                                     candidates.begin() + std::min<std::size_t>(candidates.size(), top_k));
    return out;
  }
};

// Scores looked up by the candidate's name / history string.
struct TableScorers {
  std::map<std::string, double> name, inst;
  Scorers get() const {
    return {[this](std::string_view, std::string_view b) { return name.at(std::string(b)); },
            [this](std::string_view, std::string_view b) { return inst.at(std::string(b)); }};
  }
};

CandidateAuthor cand(std::string id, std::string name, std::optional<int> h, std::vector<std::string> hist) {
  return {std::move(name), h, std::move(hist), std::move(id)};
}

void check_res(const HResolution& r, int h, HStatus s) {
  CHECK(r.h_index() == h);
  CHECK(to_string(r.status()) == to_string(s));
}

}  // namespace

TEST_CASE("affiliation confirmation examples") {
  CHECK(affiliation_confirmed("Texas Tech University", cand("", "", 1, {"Texas Tech University", "Univ X"})));
  CHECK_FALSE(affiliation_confirmed("Texas Tech University", cand("", "", 1, {"University of Texas"})));
  CHECK(affiliation_confirmed("Texas Tech University, Department of CS, Lubbock TX",
                              cand("", "", 1, {"Texas Tech University"})));
  CHECK_FALSE(affiliation_confirmed("Texas Tech University", cand("", "", 1, {})));
}

TEST_CASE("status helpers") {
  CHECK(is_accepting(HStatus::direct));
  CHECK(is_accepting(HStatus::accepted));
  CHECK_FALSE(is_accepting(HStatus::h_cap_exceeded));
  CHECK(h_status_from("name_mismatch") == HStatus::name_mismatch);
  CHECK_FALSE(h_status_from("bogus"));
  CHECK_THROWS_AS(HResolution::accept(3, HStatus::not_found), std::logic_error);
  CHECK_THROWS_AS(HResolution::reject(HStatus::direct), std::logic_error);
  CHECK(HResolution::reject(HStatus::not_found).h_index() == 0);
}

TEST_CASE("by id: confirmed history gives a direct match") {
  FakeSource src;
  src.by_id["A1"] = cand("A1", "Jane Roe", 38, {"Texas Tech University"});
  check_res(resolve_h_index("Jane Roe", "Texas Tech University", "A1", src), 38, HStatus::direct);
  CHECK(src.search_calls == 0);
}

TEST_CASE("by id: unconfirmed history is an id mismatch") {
  FakeSource src;
  src.by_id["A1"] = cand("A1", "Jane Roe", 38, {"University of Texas"});
  check_res(resolve_h_index("Jane Roe", "Texas Tech University", "A1", src), 0, HStatus::id_mismatch);
  src.by_id["A2"] = std::nullopt;
  check_res(resolve_h_index("Jane Roe", "Texas Tech University", "A2", src), 0, HStatus::id_mismatch);
  src.by_id["A3"] = cand("A3", "Jane Roe", std::nullopt, {"Texas Tech University"});
  check_res(resolve_h_index("Jane Roe", "Texas Tech University", "A3", src), 0, HStatus::id_mismatch);
  CHECK(src.search_calls == 0);
}

TEST_CASE("by id with nothing to confirm against falls under the cap") {
  FakeSource src;
  src.by_id["A1"] = cand("A1", "Jane Roe", 12, {"Somewhere"});
  src.by_id["A2"] = cand("A2", "Jane Roe", 45, {"Somewhere"});
  src.by_id["A3"] = cand("A3", "Jane Roe", 45, {});
  check_res(resolve_h_index("Jane Roe", "", "A1", src), 12, HStatus::direct);
  check_res(resolve_h_index("Jane Roe", "", "A2", src), 0, HStatus::h_cap_exceeded);
  check_res(resolve_h_index("Jane Roe", "Texas Tech University", "A3", src), 0, HStatus::h_cap_exceeded);
}

TEST_CASE("by name: two-candidate trace") {
  FakeSource src;
  src.candidates = {cand("B", "first", 12, {"h1"}), cand("C", "second", 90, {"h2"})};
  TableScorers t{{{"first", 0.95}, {"second", 0.75}}, {{"h1", 0.8}, {"h2", 0.3}}};
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 12, HStatus::accepted);
}

TEST_CASE("by name: filters sit exactly at their floors") {
  FakeSource src;
  src.candidates = {cand("B", "n", 30, {"h"})};
  TableScorers t{{{"n", 0.69}}, {{"h", 0.9}}};
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 0, HStatus::not_found);
  t.name["n"] = 0.7;
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 30, HStatus::accepted);

  t = {{{"n", 0.9}}, {{"h", 0.39}}};
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 0, HStatus::not_found);
  t.inst["h"] = 0.4;
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 0, HStatus::name_mismatch);
  t.inst["h"] = 0.6;
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 30, HStatus::accepted);
}

TEST_CASE("by name: best scorer that fails confirmation is a name mismatch") {
  FakeSource src;
  src.candidates = {cand("B", "strong", 40, {"h1"}), cand("C", "weak", 10, {"h2"})};
  TableScorers t{{{"strong", 1.0}, {"weak", 0.7}}, {{"h1", 0.5}, {"h2", 0.9}}};
  // 1.0 + 0.25 beats 0.7 + 0.45; the winner is not confirmed and no fallback happens
  check_res(resolve_h_index("Q", "Inst", "", src, t.get()), 0, HStatus::name_mismatch);
}

TEST_CASE("by name: empty institution caps h at 20") {
  FakeSource src;
  src.candidates = {cand("B", "Jane Roe", 62, {})};
  check_res(resolve_h_index("Jane Roe", "", "", src), 0, HStatus::h_cap_exceeded);
  src.candidates = {cand("B", "Jane Roe", 15, {})};
  check_res(resolve_h_index("Jane Roe", "", "", src), 15, HStatus::accepted);
  src.candidates = {cand("B", "Jane Roe", 20, {})};
  check_res(resolve_h_index("Jane Roe", "  ", "", src), 20, HStatus::accepted);
}

TEST_CASE("by name: ties and candidates without h") {
  FakeSource src;
  src.candidates = {cand("Z9", "Jane Roe", 5, {}), cand("A1", "Jane Roe", 7, {}), cand("M", "Jane Roe", std::nullopt, {})};
  check_res(resolve_h_index("Jane Roe", "", "", src), 7, HStatus::accepted);
  src.candidates = {cand("M", "Jane Roe", std::nullopt, {})};
  check_res(resolve_h_index("Jane Roe", "", "", src), 0, HStatus::not_found);
  src.candidates = {};
  check_res(resolve_h_index("Jane Roe", "", "", src), 0, HStatus::not_found);
}

TEST_CASE("lookup failures are not_found") {
  FakeSource src;
  src.fail = true;
  check_res(resolve_h_index("Jane Roe", "X", "A1", src), 0, HStatus::not_found);
  check_res(resolve_h_index("Jane Roe", "X", "", src), 0, HStatus::not_found);
  CHECK_THROWS_AS(resolve_h_index(" ", "X", "", src), std::invalid_argument);
}

TEST_CASE("rejections carry zero and the cap always holds") {
  std::mt19937 rng(7);
  const std::vector<std::string> insts{"", "Texas Tech University", "University of Texas", "Oak Ridge National Laboratory",
                                       "Sogang University, Seoul"};
  const std::vector<std::string> names{"Jane Roe", "J Roe", "Jane Q Roe", "John Doe", "Roe"};
  std::uniform_int_distribution<int> pi(0, 4), ph(0, 80), pn(0, 6), coin(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    FakeSource src;
    const int n = pn(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> hist;
      for (int k = pi(rng); k > 0; --k) hist.push_back(insts[pi(rng)]);
      std::optional<int> h;
      if (coin(rng) || coin(rng)) h = ph(rng);
      src.candidates.push_back(cand("A" + std::to_string(i), names[pi(rng)], h, hist));
    }
    if (n > 0) src.by_id["A0"] = src.candidates[0];
    const auto inst = insts[pi(rng)];
    const auto id = coin(rng) ? std::string("A0") : std::string();
    const auto r = resolve_h_index("Jane Roe", inst, id, src);
    if (!is_accepting(r.status())) CHECK(r.h_index() == 0);
    if (inst.empty()) CHECK(r.h_index() <= kUnknownInstitutionHCap);
    CHECK(r.h_index() >= 0);
  }
}

TEST_CASE("author record decoding") {
  const auto c = parse_openalex_author(R"({
    "id": "https://openalex.org/A1", "display_name": "Jane Roe",
    "summary_stats": {"h_index": 17},
    "affiliations": [{"institution": {"display_name": "Texas Tech University"}},
                     {"institution": {"display_name": " Texas Tech University "}}],
    "last_known_institutions": [{"display_name": "Oak Ridge National Laboratory"}],
    "last_known_institution": {"display_name": "Legacy Place"}})");
  CHECK(c.name == "Jane Roe");
  CHECK(c.h_index == 17);
  CHECK(c.entity_id == "https://openalex.org/A1");
  CHECK(c.affiliation_history ==
        std::vector<std::string>{"Texas Tech University", "Oak Ridge National Laboratory", "Legacy Place"});
  CHECK_FALSE(parse_openalex_author(R"({"display_name": "X"})").h_index);
  CHECK_THROWS_AS(parse_openalex_author("[1]"), CandidateSourceError);
}

TEST_CASE("index-backed source") {
  testing::ScriptedBackend be;
  be.on("https://api.openalex.org/authors/A1", 200,
        R"({"id":"https://openalex.org/A1","display_name":"Jane Roe","summary_stats":{"h_index":9}})");
  be.on("https://api.openalex.org/authors/A2", 500);
  be.on(openalex_author_search_url("Jane Roe", 5, ""), 200,
        R"({"results":[{"display_name":"Jane Roe","id":"x1"},{"display_name":"J Roe","id":"x2"}]})");
  be.on(openalex_author_search_url("Jane Roe", 1, ""), 200,
        R"({"results":[{"display_name":"Jane Roe","id":"x1"},{"display_name":"J Roe","id":"x2"}]})");
  be.on(openalex_author_search_url("Bad Json", 5, ""), 200, "<html>");
  SimulatedClock clock;
  Transport t(be, clock);
  OpenAlexCandidateSource src(t, "");
  CHECK(src.fetch_by_id("https://openalex.org/A1")->h_index == 9);
  CHECK(src.fetch_by_id("A1")->name == "Jane Roe");
  CHECK_FALSE(src.fetch_by_id("https://openalex.org/A404"));
  CHECK_THROWS_AS(src.fetch_by_id("https://openalex.org/A2"), CandidateSourceError);
  CHECK_THROWS_AS(src.fetch_by_id("https://example.org/A1"), CandidateSourceError);
  CHECK(src.search_by_name("Jane Roe", 5).size() == 2);
  CHECK(src.search_by_name("Jane Roe", 1).size() == 1);
  CHECK_THROWS_AS(src.search_by_name("Bad Json", 5), CandidateSourceError);
  CHECK(openalex_author_search_url("Jane Roe", 5, "me@x.org") ==
        "https://api.openalex.org/authors?search=Jane%20Roe&per-page=5&mailto=me%40x.org");
}
