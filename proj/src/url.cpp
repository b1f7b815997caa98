#include "citescope/url.hpp"

#include <algorithm>

#include "citescope/text.hpp"

namespace citescope::url {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

QueryParams parse_query(std::string_view q) {
  QueryParams out;
  std::size_t start = 0;
  while (start < q.size()) {
    auto amp = q.find('&', start);
    if (amp == std::string_view::npos) amp = q.size();
    const auto pair = q.substr(start, amp - start);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos) {
        out.emplace_back(percent_decode(pair), "");
      } else {
        out.emplace_back(percent_decode(pair.substr(0, eq)), percent_decode(pair.substr(eq + 1)));
      }
    }
    start = amp + 1;
  }
  return out;
}

}  // namespace

std::optional<Url> parse(std::string_view absolute) {
  const auto scheme_end = absolute.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  Url u;
  u.scheme = text::to_lower(absolute.substr(0, scheme_end));
  if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
  auto rest = absolute.substr(scheme_end + 3);
  const auto host_end = rest.find_first_of("/?#");
  u.host = text::to_lower(rest.substr(0, host_end));
  if (u.host.empty()) return std::nullopt;
  rest = host_end == std::string_view::npos ? std::string_view{} : rest.substr(host_end);

  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    u.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  const auto qmark = rest.find('?');
  u.path = std::string(rest.substr(0, qmark));
  if (u.path.empty()) u.path = "/";
  if (qmark != std::string_view::npos) u.query = parse_query(rest.substr(qmark + 1));
  return u;
}

std::string host_of(std::string_view absolute) {
  const auto u = parse(absolute);
  return u ? u->host : std::string{};
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() * 3);
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex_value(s[i + 1]);
      const int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i] == '+' ? ' ' : s[i]);
  }
  return out;
}

std::string encode_query(const QueryParams& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out.push_back('&');
    out += percent_encode(k);
    out.push_back('=');
    out += percent_encode(v);
  }
  return out;
}

std::string build(std::string_view base, const QueryParams& params) {
  std::string out(base);
  if (!params.empty()) {
    out.push_back('?');
    out += encode_query(params);
  }
  return out;
}

std::string normalize(std::string_view absolute) {
  auto u = parse(absolute);
  if (!u) return std::string(absolute);
  std::stable_sort(u->query.begin(), u->query.end());
  std::string out = u->scheme + "://" + u->host + u->path;
  if (!u->query.empty()) out += "?" + encode_query(u->query);
  return out;
}

std::string resolve(std::string_view origin, std::string_view href) {
  if (href.find("://") != std::string_view::npos) return std::string(href);
  std::string out(origin);
  if (!out.empty() && out.back() == '/') out.pop_back();
  if (href.empty() || href.front() != '/') out.push_back('/');
  out.append(href);
  return out;
}

std::optional<std::string> query_param(std::string_view any_url, std::string_view key) {
  const auto qmark = any_url.find('?');
  if (qmark == std::string_view::npos) return std::nullopt;
  auto q = any_url.substr(qmark + 1);
  q = q.substr(0, q.find('#'));
  for (const auto& [k, v] : parse_query(q)) {
    if (k == key) return v;
  }
  return std::nullopt;
}

}  // namespace citescope::url
