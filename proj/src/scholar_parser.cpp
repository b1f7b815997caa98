#include "citescope/scholar_parser.hpp"

#include <algorithm>
#include <cctype>

#include "citescope/html.hpp"
#include "citescope/text.hpp"
#include "citescope/url.hpp"

namespace citescope {

namespace {

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) || cp == '_';
  return !text::is_punctuation(cp) && !text::is_unicode_space(cp);
}

bool word_char_before(std::string_view s, std::size_t pos) {
  if (pos == 0) return false;
  std::size_t start = pos - 1;
  while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
  return is_word_codepoint(text::decode_utf8(s, start));
}

bool word_char_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return false;
  return is_word_codepoint(text::decode_utf8(s, pos));
}

// Start offset of the last standalone (19|20)dd in `s`, or npos.
std::size_t last_year_match(std::string_view s) {
  std::size_t found = std::string_view::npos;
  for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
    const bool century = (s[i] == '1' && s[i + 1] == '9') || (s[i] == '2' && s[i + 1] == '0');
    if (!century || !std::isdigit(static_cast<unsigned char>(s[i + 2])) ||
        !std::isdigit(static_cast<unsigned char>(s[i + 3])))
      continue;
    if (word_char_before(s, i) || word_char_at(s, i + 4)) continue;
    found = i;
  }
  return found;
}

std::string strip_trailing_comma_space(std::string s) {
  while (!s.empty() && (s.back() == ',' || s.back() == ' ')) s.pop_back();
  return text::trim(s);
}

std::string clean_text(const html::Node& n) { return text::collapse_whitespace(n.text_content()); }

// Text of `n` skipping descendants with class `skip_class`.
void text_without(const html::Node& n, std::string_view skip_class, std::string& out) {
  for (const auto& c : n.children()) {
    if (c->is_element()) {
      if (c->has_class(skip_class)) continue;
      text_without(*c, skip_class, out);
    } else {
      out += c->text();
    }
  }
}

// Title of a result heading: the link text when there is one, else the heading
// text minus leading "[PDF]"-style tags.
std::string heading_title(const html::Node& h3) {
  if (const auto* a = h3.find_first(html::tag_is("a"))) {
    auto t = clean_text(*a);
    if (!t.empty()) return t;
  }
  std::string t = clean_text(h3);
  while (!t.empty() && t.front() == '[') {
    const auto close = t.find(']');
    if (close == std::string::npos) break;
    t = text::trim(t.substr(close + 1));
  }
  return t;
}

CitingCard make_card(std::string title, std::string meta_raw) {
  CitingCard card;
  card.title = std::move(title);
  card.meta_raw = std::move(meta_raw);
  auto meta = parse_meta(card.meta_raw);
  card.authors_raw = std::move(meta.authors);
  card.venue = std::move(meta.venue);
  card.year = std::move(meta.year);
  card.truncated_authors = has_truncation_marker(card.authors_raw);
  return card;
}

std::vector<CitingCard> cards_by_container(const html::Document& doc) {
  std::vector<CitingCard> out;
  for (const auto* ri : doc.find_all(html::tag_with_class("div", "gs_ri"))) {
    const auto* h3 = ri->find_first(html::tag_with_class("h3", "gs_rt"));
    const auto* meta = ri->find_first(html::tag_with_class("div", "gs_a"));
    if (!h3 || !meta) continue;
    auto title = heading_title(*h3);
    if (title.empty()) continue;
    out.push_back(make_card(std::move(title), meta->text_content()));
  }
  return out;
}

std::vector<CitingCard> cards_by_result_item(const html::Document& doc) {
  std::vector<CitingCard> out;
  for (const auto* item : doc.find_all(html::has_attr("data-cid"))) {
    const auto* h3 = item->find_first(html::tag_is("h3"));
    if (!h3) continue;
    const html::Node* meta = item->find_first(html::has_class("gs_a"));
    if (!meta) {
      const auto* next = h3->next_element_sibling();
      if (next && next->tag() == "div") meta = next;
    }
    if (!meta) continue;
    auto title = heading_title(*h3);
    if (title.empty()) continue;
    out.push_back(make_card(std::move(title), meta->text_content()));
  }
  return out;
}

std::vector<CitingCard> cards_by_title_meta_pair(const html::Document& doc) {
  std::vector<CitingCard> out;
  for (const auto* h3 : doc.find_all(html::tag_is("h3"))) {
    if (!h3->find_first(html::tag_is("a"))) continue;
    const auto* next = h3->next_element_sibling();
    if (!next || next->tag() != "div") continue;
    auto title = heading_title(*h3);
    if (title.empty()) continue;
    out.push_back(make_card(std::move(title), next->text_content()));
  }
  return out;
}

std::optional<long> reported_total(const html::Document& doc) {
  const auto* header = doc.by_id("gs_ab_md");
  if (!header) return std::nullopt;
  const auto t = header->text_content();
  const auto at = t.find("result");
  if (at == std::string::npos) return std::nullopt;
  // Walk back over the number, allowing thousands separators.
  std::size_t end = at;
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(t[end - 1]))) --end;
  std::size_t begin = end;
  while (begin > 0) {
    const char c = t[begin - 1];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == ',' || c == '.') {
      --begin;
    } else {
      break;
    }
  }
  std::string digits;
  for (std::size_t i = begin; i < end; ++i) {
    if (std::isdigit(static_cast<unsigned char>(t[i]))) digits.push_back(t[i]);
  }
  if (digits.empty()) return std::nullopt;
  return std::stol(digits);
}

bool is_empty_results_page(const html::Document& doc) {
  if (const auto* mid = doc.by_id("gs_res_ccl_mid")) {
    const bool has_element_child = std::any_of(mid->children().begin(), mid->children().end(),
                                               [](const auto& c) { return c->is_element(); });
    if (!has_element_child) return true;
  }
  return doc.root().text_content().find("did not match any articles") != std::string::npos;
}

}  // namespace

MetaFields parse_meta(std::string_view raw) {
  std::string s(raw);
  s = text::replace_all(std::move(s), "\xC2\xA0", " ");
  s = text::replace_all(std::move(s), "\xE2\x80\x93", "-");
  s = text::replace_all(std::move(s), "\xE2\x80\x94", "-");
  std::string collapsed;
  collapsed.reserve(s.size());
  for (char c : s) {
    if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed.push_back(c);
  }

  std::vector<std::string_view> parts;
  std::string_view rest = collapsed;
  while (true) {
    const auto sep = rest.find(" - ");
    if (sep == std::string_view::npos) {
      parts.push_back(rest);
      break;
    }
    parts.push_back(rest.substr(0, sep));
    rest = rest.substr(sep + 3);
  }

  MetaFields out;
  out.authors = text::trim(parts[0]);
  if (parts.size() < 2) return out;

  const std::string venue_year = text::trim(parts[1]);
  const auto year_at = last_year_match(venue_year);
  if (year_at == std::string_view::npos) {
    out.venue = strip_trailing_comma_space(venue_year);
  } else {
    out.year = venue_year.substr(year_at, 4);
    out.venue = strip_trailing_comma_space(venue_year.substr(0, year_at));
  }
  return out;
}

bool has_truncation_marker(std::string_view authors) {
  const auto t = text::trim(authors);
  return text::ends_with(t, "\xE2\x80\xA6") || text::ends_with(t, "...");
}

bool is_publication_year(std::string_view s) {
  return s.size() == 4 && ((s[0] == '1' && s[1] == '9') || (s[0] == '2' && s[1] == '0')) &&
         std::isdigit(static_cast<unsigned char>(s[2])) &&
         std::isdigit(static_cast<unsigned char>(s[3]));
}

std::vector<Publication> parse_profile_rows(std::string_view page_html) {
  const auto doc = html::Document::parse(page_html);
  std::vector<Publication> out;
  for (const auto* row : doc.find_all(html::tag_with_class("tr", "gsc_a_tr"))) {
    Publication pub;
    if (const auto* a = row->find_first(html::has_class("gsc_a_at"))) {
      pub.title = clean_text(*a);
      if (const auto* href = a->attr("href"); href && !href->empty()) {
        pub.detail_url = url::resolve(kScholarOrigin, *href);
      }
    }
    if (pub.title.empty()) continue;

    if (const auto* cell = row->find_first(html::has_class("gsc_a_t"))) {
      const auto grays = cell->find_all(html::tag_with_class("div", "gs_gray"));
      if (!grays.empty()) pub.authors_raw = clean_text(*grays[0]);
      if (grays.size() > 1) {
        std::string venue;
        text_without(*grays[1], "gs_oph", venue);
        pub.venue = strip_trailing_comma_space(text::collapse_whitespace(venue));
      }
    }
    if (const auto* cited = row->find_first(html::has_class("gsc_a_ac"))) {
      const auto t = text::trim(cited->text_content());
      std::size_t n = 0;
      while (n < t.size() && std::isdigit(static_cast<unsigned char>(t[n]))) ++n;
      pub.citation_count = n ? std::stoi(t.substr(0, n)) : 0;
    }
    if (const auto* y = row->find_first(html::has_class("gsc_a_h"))) {
      auto year = text::trim(y->text_content());
      if (is_publication_year(year)) pub.year = std::move(year);
    }
    out.push_back(std::move(pub));
  }

  if (out.empty()) {
    // A profile with no articles still renders the table body (and usually a
    // "no articles" cell). Rows of another shape mean the markup moved.
    const auto* body = doc.by_id("gsc_a_b");
    const bool legit_empty =
        body && (body->find_first(html::has_class("gsc_a_e")) || !body->find_first(html::tag_is("tr")));
    if (!legit_empty) throw ParseFailure("profile page", "tr.gsc_a_tr");
  }
  return out;
}

std::string parse_researcher_name(std::string_view page_html) {
  const auto doc = html::Document::parse(page_html);
  const auto* n = doc.by_id("gsc_prf_in");
  return n ? clean_text(*n) : std::string{};
}

CitingPage parse_citing_page(std::string_view page_html) {
  const auto doc = html::Document::parse(page_html);
  CitingPage page;
  page.reported_total = reported_total(doc);

  struct Attempt {
    CardStrategy strategy;
    std::vector<CitingCard> (*run)(const html::Document&);
  };
  static constexpr Attempt kAttempts[] = {
      {CardStrategy::container_class, &cards_by_container},
      {CardStrategy::result_item, &cards_by_result_item},
      {CardStrategy::title_meta_pair, &cards_by_title_meta_pair},
  };
  for (const auto& attempt : kAttempts) {
    auto cards = attempt.run(doc);
    if (!cards.empty()) {
      page.cards = std::move(cards);
      page.strategy = attempt.strategy;
      return page;
    }
  }
  if (!is_empty_results_page(doc)) {
    throw ParseFailure("citing page", "div.gs_ri | [data-cid] | h3+div");
  }
  page.empty_results = true;
  return page;
}

std::vector<CitingCard> parse_citing_cards(std::string_view page_html) {
  return parse_citing_page(page_html).cards;
}

std::optional<std::string> extract_cluster_id(std::string_view detail_html) {
  const auto doc = html::Document::parse(detail_html);
  for (const auto* a : doc.find_all(html::tag_is("a"))) {
    const auto label = text::collapse_whitespace(a->text_content());
    if (!text::starts_with(label, "Cited by")) continue;
    const auto* href = a->attr("href");
    if (!href) continue;
    const auto cites = url::query_param(*href, "cites");
    if (!cites || cites->empty()) continue;
    const bool numeric = std::all_of(cites->begin(), cites->end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (numeric) return cites;
  }
  return std::nullopt;
}

}  // namespace citescope
