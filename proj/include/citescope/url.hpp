#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citescope::url {

using QueryParams = std::vector<std::pair<std::string, std::string>>;

struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase, may carry ":port"
  std::string path;    // starts with '/'
  QueryParams query;   // decoded
  std::string fragment;
};

/// Parses an absolute http(s) URL. Returns nullopt for anything else.
std::optional<Url> parse(std::string_view absolute);

std::string host_of(std::string_view absolute);

/// RFC 3986 unreserved characters pass through; every other byte is %XX.
std::string percent_encode(std::string_view s);
std::string percent_decode(std::string_view s);

std::string encode_query(const QueryParams& params);

/// "https://host/path" + "?" + encoded query.
std::string build(std::string_view base, const QueryParams& params);

/// Canonical form used as the fixture-manifest key: lowercase scheme and host,
/// fragment dropped, query parameters decoded, sorted and re-encoded.
std::string normalize(std::string_view absolute);

/// Resolves `href` (absolute, or root-relative) against `origin` ("https://host").
std::string resolve(std::string_view origin, std::string_view href);

std::optional<std::string> query_param(std::string_view any_url, std::string_view key);

}  // namespace citescope::url
