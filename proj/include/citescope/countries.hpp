#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace citescope {

/// Short English name for an ISO 3166-1 alpha-2 code (case-insensitive).
std::optional<std::string> country_name(std::string_view code);

/// Name when known, otherwise the code unchanged.
std::string country_label(std::string_view code);

}  // namespace citescope
