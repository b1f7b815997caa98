#include <doctest.h>

#include <algorithm>
#include <random>

#include "citescope/similarity.hpp"

using namespace citescope;

namespace {

TokenSet toks(std::initializer_list<const char*> ws) {
  std::string s;
  for (auto w : ws) s += std::string(w) + " ";
  return TokenSet::from_text(s);
}

std::string random_phrase(std::mt19937& rng, const std::vector<std::string>& vocab, int max_words) {
  std::uniform_int_distribution<int> len(0, max_words), pick(0, static_cast<int>(vocab.size()) - 1);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) s += vocab[pick(rng)] + (i % 3 == 0 ? ", " : " ");
  return s;
}

const std::vector<std::string> kVocab = {"Texas", "tech", "University", "of", "Oak", "ridge", "National",
                                         "Laboratory", "data", "Search", "parallel", "semantic", "service",
                                         "the", "Center", "Sogang", "research", "(HPC)", "Lab.", "Zürich"};

}  // namespace

TEST_CASE("title_sim examples") {
  CHECK(title_sim("Parallel Semantic Querying Service", "parallel semantic querying service") == 1.0);
  CHECK(title_sim("alpha beta gamma delta", "alpha beta") == 0.5);
  CHECK(title_sim("", "any title") == 0.0);
  CHECK(title_sim("any title", "") == 0.0);
}

TEST_CASE("institution word sets drop stop words") {
  CHECK(inst_tokens("Texas Tech University") == toks({"texas", "tech"}));
  CHECK(inst_tokens("University of Texas") == toks({"texas"}));
  CHECK(inst_tokens("National Center for Research").empty());
  CHECK(institution_stop_words().size() == 18);
}

TEST_CASE("inst_sim examples") {
  CHECK(inst_sim("Texas Tech University", "University of Texas") == 0.5);
  CHECK(inst_sim("Oak Ridge National Laboratory", "Oak Ridge National Laboratory") == 1.0);
  CHECK(inst_sim("Texas Tech University, Department of CS, Lubbock TX", "Texas Tech University") == 1.0);
  CHECK(inst_sim("National Center for Research", "National Center for Research") == 0.0);
}

TEST_CASE("name_sim examples") {
  CHECK(name_sim("John Smith", "john smith") == 1.0);
  CHECK(name_sim("John A Smith", "John Smith") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(name_sim("Wei Li", "Maria Gonzalez") == 0.0);
}

TEST_CASE("primary institution is the text before the first comma") {
  CHECK(primary_institution("Texas Tech University, Dept of CS") == "Texas Tech University");
  CHECK(primary_institution("  MIT  ") == "MIT");
  CHECK(primary_institution(", leading") == "");
  CHECK(primary_institution("") == "");
}

TEST_CASE("tokenizer strips punctuation and folds ASCII case only") {
  CHECK(TokenSet::from_text("(HPC) Lab. \xE2\x80\x9CQuoted\xE2\x80\x9D") == toks({"hpc", "lab", "quoted"}));
  CHECK(TokenSet::from_text("Z\xC3\xBCrich").contains("z\xC3\xBCrich"));
  CHECK(TokenSet::from_text("a\xC2\xA0" "b").size() == 2);
  CHECK(TokenSet::from_text("--- ...").empty());
}

TEST_CASE("similarities are bounded, symmetric and set-based") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_phrase(rng, kVocab, 7);
    const auto b = random_phrase(rng, kVocab, 7);
    for (auto f : {&title_sim, &inst_sim, &name_sim}) {
      const double ab = f(a, b);
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
      CHECK(ab == f(b, a));
    }
    // order and repetition do not matter
    auto words = TokenSet::from_text(a);
    std::vector<std::string> shuffled(words.begin(), words.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::string re;
    for (const auto& w : shuffled) re += w + " " + w + " ";
    CHECK(title_sim(re, b) == title_sim(a, b));
    if (!words.empty()) CHECK(title_sim(a, a) == 1.0);
  }
}

TEST_CASE("overlap_ratio matches a brute-force count") {
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto a = TokenSet::from_text(random_phrase(rng, kVocab, 9));
    const auto b = TokenSet::from_text(random_phrase(rng, kVocab, 9));
    int common = 0;
    for (const auto& x : a)
      for (const auto& y : b) common += (x == y);
    const double expect =
        (a.empty() || b.empty()) ? 0.0 : static_cast<double>(common) / static_cast<double>(std::max(a.size(), b.size()));
    CHECK(overlap_ratio(a, b) == expect);
  }
}
