#include "citescope/countries.hpp"

#include <cctype>
#include <map>

#include "citescope/assets.hpp"
#include "citescope/text.hpp"

namespace citescope {

namespace {

const std::map<std::string, std::string, std::less<>>& table() {
  static const auto t = [] {
    std::map<std::string, std::string, std::less<>> m;
    const auto src = assets::country_names_tsv();
    std::size_t start = 0;
    while (start < src.size()) {
      auto end = src.find('\n', start);
      if (end == std::string_view::npos) end = src.size();
      const auto line = src.substr(start, end - start);
      start = end + 1;
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) continue;
      m.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    }
    return m;
  }();
  return t;
}

}  // namespace

std::optional<std::string> country_name(std::string_view code) {
  std::string upper(text::trim(code));
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const auto it = table().find(upper);
  if (it == table().end()) return std::nullopt;
  return it->second;
}

std::string country_label(std::string_view code) {
  auto name = country_name(code);
  return name ? *name : std::string(code);
}

}  // namespace citescope
