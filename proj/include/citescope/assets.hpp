#pragma once

#include <string_view>

// Files compiled into the library (see cmake/EmbedAssets.cmake).
namespace citescope::assets {

std::string_view leaflet_js();
std::string_view leaflet_css();
std::string_view leaflet_heat_js();
std::string_view map_script_js();
std::string_view org_blocklist_txt();
std::string_view country_names_tsv();

}  // namespace citescope::assets
