#include <fstream>
#include <sstream>

#include <json.hpp>

#include "citescope/transport.hpp"
#include "citescope/url.hpp"

namespace citescope {

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FixtureError("cannot read fixture file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FixtureBackend::FixtureBackend(const std::filesystem::path& corpus_dir) {
  const auto manifest_path = corpus_dir / "manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(slurp(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw FixtureError("corrupt manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object()) throw FixtureError("manifest must be a JSON object");

  for (const auto& [key, spec] : manifest.items()) {
    if (!spec.is_object() || !spec.contains("status")) {
      throw FixtureError("manifest entry without status: " + key);
    }
    Entry e;
    const auto& status = spec["status"];
    if (status.is_number_integer()) {
      e.statuses.push_back(status.get<int>());
    } else if (status.is_array() && !status.empty()) {
      for (const auto& s : status) e.statuses.push_back(s.get<int>());
    } else {
      throw FixtureError("bad status in manifest entry: " + key);
    }
    if (spec.contains("file") && !spec["file"].get<std::string>().empty()) {
      e.body = slurp(corpus_dir / spec["file"].get<std::string>());
    }
    entries_[url::normalize(key)] = std::move(e);
  }
}

RawResponse FixtureBackend::fetch(const Request& request) {
  requests_.push_back(request);
  auto it = entries_.find(url::normalize(request.url));
  if (it == entries_.end()) return {404, {}, {}};
  auto& e = it->second;
  const auto idx = std::min(e.served, e.statuses.size() - 1);
  ++e.served;
  const int status = e.statuses[idx];
  return {status, status == 429 ? std::string{} : e.body, {}};
}

}  // namespace citescope
