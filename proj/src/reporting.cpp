#include "citescope/reporting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "citescope/countries.hpp"
#include "citescope/similarity.hpp"
#include "citescope/text.hpp"

namespace citescope {

std::vector<AuthorRecord> representative_records(const std::vector<AuthorRecord>& records) {
  std::vector<AuthorRecord> out;
  std::map<std::string, std::size_t, std::less<>> slot;
  auto rank = [](const AuthorRecord& r) {
    if (!r.author_entity_id.empty()) return 2;
    if (!text::trim(r.institution).empty()) return 1;
    return 0;
  };
  for (const auto& r : records) {
    auto [it, fresh] = slot.emplace(r.full_name, out.size());
    if (fresh) {
      out.push_back(r);
    } else if (rank(r) > rank(out[it->second])) {
      out[it->second] = r;
    }
  }
  return out;
}

std::vector<RankedAuthor> rank_by_citations(const std::vector<AuthorRecord>& records) {
  std::map<std::string, std::set<std::string>, std::less<>> titles;
  for (const auto& r : records) titles[r.full_name].insert(r.citing_paper_title);

  std::vector<RankedAuthor> rows;
  for (const auto& rep : representative_records(records)) {
    RankedAuthor row;
    row.full_name = rep.full_name;
    row.institution = rep.institution;
    row.country_code = rep.country_code;
    row.distinct_citing_papers = static_cast<int>(titles[rep.full_name].size());
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const RankedAuthor& a, const RankedAuthor& b) {
    if (a.distinct_citing_papers != b.distinct_citing_papers)
      return a.distinct_citing_papers > b.distinct_citing_papers;
    return a.full_name < b.full_name;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
  return rows;
}

std::vector<RankedAuthor> rank_by_hindex(const std::vector<ResolvedAuthor>& resolutions) {
  std::vector<RankedAuthor> accepted, rejected;
  std::set<std::string, std::less<>> seen;
  for (const auto& [rec, res] : resolutions) {
    if (!seen.insert(rec.full_name).second) continue;
    RankedAuthor row;
    row.full_name = rec.full_name;
    row.institution = rec.institution;
    row.country_code = rec.country_code;
    row.h_index = res.h_index();
    row.status = res.status();
    (is_accepting(res.status()) ? accepted : rejected).push_back(std::move(row));
  }
  std::sort(accepted.begin(), accepted.end(), [](const RankedAuthor& a, const RankedAuthor& b) {
    if (*a.h_index != *b.h_index) return *a.h_index > *b.h_index;
    return a.full_name < b.full_name;
  });
  std::sort(rejected.begin(), rejected.end(),
            [](const RankedAuthor& a, const RankedAuthor& b) { return a.full_name < b.full_name; });
  accepted.insert(accepted.end(), std::make_move_iterator(rejected.begin()),
                  std::make_move_iterator(rejected.end()));
  for (std::size_t i = 0; i < accepted.size(); ++i) accepted[i].rank = static_cast<int>(i) + 1;
  return accepted;
}

SummaryStats compute_summary(const std::vector<AuthorRecord>& records,
                             const std::vector<Publication>& publications,
                             const std::vector<CitingPaper>& citing) {
  std::set<std::string, std::less<>> names, countries, institutions;
  std::set<std::pair<std::string, std::string>> cities;
  for (const auto& r : records) {
    names.insert(r.full_name);
    if (!text::trim(r.country_code).empty()) countries.insert(r.country_code);
    if (auto inst = primary_institution(r.institution); !inst.empty()) institutions.insert(std::move(inst));
    if (!text::trim(r.city).empty()) cities.emplace(r.city, r.country_code);
  }

  SummaryStats s;
  s.unique_researchers = static_cast<int>(names.size());
  s.unique_countries = static_cast<int>(countries.size());
  s.unique_institutions = static_cast<int>(institutions.size());
  s.unique_cities = static_cast<int>(cities.size());

  std::map<std::string, int, std::less<>> collected;
  for (const auto& c : citing) {
    if (!c.skipped) ++collected[c.cited_paper_title];
  }
  for (const auto& p : publications) {
    const auto it = collected.find(p.title);
    s.per_paper_citations.push_back({p.title, p.citation_count, it == collected.end() ? 0 : it->second});
  }
  return s;
}

std::vector<std::pair<std::string, int>> country_counts(const std::vector<AuthorRecord>& records) {
  std::map<std::string, int> counts;
  for (const auto& r : representative_records(records)) {
    if (!text::trim(r.country_code).empty()) ++counts[r.country_code];
  }
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

int bar_length(int count, int max_count) {
  if (count <= 0 || max_count <= 0) return 0;
  // round-half-up of 40*count/max in integers
  const long long num = 2LL * kBarWidth * count + max_count;
  const int len = static_cast<int>(num / (2LL * max_count));
  return std::clamp(len, 1, kBarWidth);
}

std::string render_summary_text(const SummaryStats& stats,
                                const std::vector<std::pair<std::string, int>>& country_counts,
                                const std::string& researcher_name) {
  std::ostringstream out;
  const std::string heading =
      researcher_name.empty() ? "Citation summary" : "Citation summary: " + researcher_name;
  out << heading << "\n" << std::string(heading.size(), '=') << "\n\n";
  out << "Unique researchers:   " << stats.unique_researchers << "\n";
  out << "Unique countries:     " << stats.unique_countries << "\n";
  out << "Unique institutions:  " << stats.unique_institutions << "\n";
  out << "Unique cities:        " << stats.unique_cities << "\n";
  out << "Publications:         " << stats.per_paper_citations.size() << "\n\n";

  out << "Citing researchers by country\n-----------------------------\n";
  if (country_counts.empty()) out << "(none)\n";
  int max_count = 0;
  std::size_t label_width = 0;
  std::vector<std::string> labels;
  for (const auto& [code, n] : country_counts) {
    max_count = std::max(max_count, n);
    labels.push_back(country_label(code) + " (" + code + ")");
    label_width = std::max(label_width, labels.back().size());
  }
  for (std::size_t i = 0; i < country_counts.size(); ++i) {
    const int n = country_counts[i].second;
    out << labels[i] << std::string(label_width - labels[i].size() + 2, ' ');
    const auto count = std::to_string(n);
    out << std::string(count.size() < 5 ? 5 - count.size() : 0, ' ') << count << "  "
        << std::string(static_cast<std::size_t>(bar_length(n, max_count)), '#') << "\n";
  }

  out << "\nCitations per publication (profile / collected)\n"
         "-----------------------------------------------\n";
  if (stats.per_paper_citations.empty()) out << "(none)\n";
  for (const auto& p : stats.per_paper_citations) {
    const auto a = std::to_string(p.profile_count);
    const auto b = std::to_string(p.collected_count);
    out << std::string(a.size() < 6 ? 6 - a.size() : 0, ' ') << a << " / "
        << b << std::string(b.size() < 6 ? 6 - b.size() : 0, ' ') << "  " << p.title << "\n";
  }
  return out.str();
}

}  // namespace citescope
