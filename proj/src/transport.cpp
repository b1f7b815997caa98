#include "citescope/transport.hpp"

#include <thread>

#include "citescope/url.hpp"

namespace citescope {

double SystemClock::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
}

void SystemClock::sleep_for(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::rate_limited_skipped: return "rate_limited_skipped";
    case Outcome::error: return "error";
  }
  return "error";
}

RawResponse Transport::issue(const std::string& url, const std::string& host,
                             const HostPolicy& policy) {
  if (auto it = last_start_.find(host); it != last_start_.end()) {
    const double ready_at = it->second + policy.min_delay;
    const double now = clock_.now();
    if (now < ready_at) clock_.sleep_for(ready_at - now);
  }
  const double started = clock_.now();
  last_start_[host] = started;

  Request req{url, {}};
  if (policy.browser_identity) {
    req.headers.emplace_back("User-Agent", browser_ua_);
    req.headers.emplace_back("Accept-Language", std::string(kBrowserAcceptLanguage));
  } else {
    req.headers.emplace_back("User-Agent", std::string(kToolUserAgent));
  }
  auto resp = backend_.fetch(req);
  log_.push_back({host, url, started, resp.status});
  return resp;
}

TransportResult Transport::get(const std::string& url, const HostPolicy& policy) {
  TransportResult result;
  const auto host = url::host_of(url);
  if (host.empty()) {
    result.diagnostic = "malformed url: " + url;
    return result;
  }

  int retries = 0;
  while (true) {
    auto resp = issue(url, host, policy);
    result.status = resp.status;
    if (resp.status == 429) {
      if (retries < policy.max_retries) {
        ++retries;
        clock_.sleep_for(policy.backoff_wait);
        continue;
      }
      result.outcome = Outcome::rate_limited_skipped;
      result.diagnostic = "HTTP 429 persisted after " + std::to_string(retries) + " retry";
      return result;
    }
    if (resp.status == 0) {
      result.outcome = Outcome::error;
      result.diagnostic = resp.error.empty() ? "network failure" : resp.error;
      return result;
    }
    result.body = std::move(resp.body);
    if (resp.status >= 200 && resp.status < 300) {
      result.outcome = Outcome::ok;
    } else {
      result.outcome = Outcome::error;
      result.diagnostic = "HTTP " + std::to_string(resp.status);
    }
    return result;
  }
}

std::size_t Transport::calls_to(std::string_view host) const {
  std::size_t n = 0;
  for (const auto& c : log_) {
    if (c.host == host) ++n;
  }
  return n;
}

}  // namespace citescope

#ifndef CITESCOPE_HAVE_LIVE_BACKEND
namespace citescope {
std::unique_ptr<Backend> make_live_backend() { return nullptr; }
}  // namespace citescope
#endif
