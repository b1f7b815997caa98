#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <map>

#include "citescope/transport.hpp"
#include "citescope/url.hpp"

namespace citescope {

namespace {

class LiveBackend final : public Backend {
 public:
  RawResponse fetch(const Request& request) override {
    const auto parsed = url::parse(request.url);
    if (!parsed) return {0, {}, "malformed url: " + request.url};

    const std::string origin = parsed->scheme + "://" + parsed->host;
    auto& client = client_for(origin);

    std::string target = parsed->path;
    if (!parsed->query.empty()) target += "?" + url::encode_query(parsed->query);

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);

    auto res = client.Get(target, headers);
    if (!res) return {0, {}, "request failed: " + httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  httplib::Client& client_for(const std::string& origin) {
    auto it = clients_.find(origin);
    if (it == clients_.end()) {
      auto c = std::make_unique<httplib::Client>(origin);
      c->set_follow_location(true);
      c->set_connection_timeout(15);
      c->set_read_timeout(30);
      it = clients_.emplace(origin, std::move(c)).first;
    }
    return *it->second;
  }

  std::map<std::string, std::unique_ptr<httplib::Client>> clients_;
};

}  // namespace

std::unique_ptr<Backend> make_live_backend() { return std::make_unique<LiveBackend>(); }

}  // namespace citescope
