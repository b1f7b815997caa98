#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "citescope/transport.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path fixtures() { return fs::path(CITESCOPE_FIXTURES); }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json golden(const std::string& corpus) {
  return nlohmann::json::parse(slurp(fixtures() / corpus / "golden.json"));
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("citescope_" + tag + "_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// In-memory backend: url -> queue of responses, last one repeating.
class ScriptedBackend final : public citescope::Backend {
 public:
  void on(const std::string& url, int status, std::string body = {}) {
    script_[url].push_back({status, std::move(body), {}});
  }
  void fail(const std::string& url, std::string error) { script_[url].push_back({0, {}, std::move(error)}); }

  citescope::RawResponse fetch(const citescope::Request& r) override {
    seen.push_back(r);
    auto it = script_.find(r.url);
    if (it == script_.end()) return {404, {}, {}};
    auto& q = it->second;
    auto& n = served_[r.url];
    const auto& resp = q[std::min(n, q.size() - 1)];
    ++n;
    return resp;
  }

  std::vector<citescope::Request> seen;

 private:
  std::map<std::string, std::vector<citescope::RawResponse>> script_;
  std::map<std::string, std::size_t> served_;
};

// Map of every regular file under `dir` (relative path -> bytes).
inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace testing
