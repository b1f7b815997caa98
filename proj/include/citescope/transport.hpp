#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citescope {

/// Per-host request discipline.
struct HostPolicy {
  double min_delay = 0.0;     // seconds between request starts to one host
  double backoff_wait = 30.0; // seconds to wait after a 429
  int max_retries = 1;
  bool browser_identity = false;  // send the desktop-browser headers

  static HostPolicy scholar() { return {2.0, 30.0, 1, true}; }
  static HostPolicy metadata_api() { return {1.0, 30.0, 1, false}; }
  static HostPolicy geocoder() { return {1.1, 30.0, 1, false}; }
};

using Headers = std::vector<std::pair<std::string, std::string>>;

struct Request {
  std::string url;
  Headers headers;
};

/// What a backend saw on the wire. status == 0 means the request never got a
/// response (DNS, TLS, socket); `error` then says why.
struct RawResponse {
  int status = 0;
  std::string body;
  std::string error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual RawResponse fetch(const Request& request) = 0;
};

/// Monotonic seconds. Tests use SimulatedClock so pacing is observable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  virtual void sleep_for(double seconds) = 0;
};

class SystemClock final : public Clock {
 public:
  double now() const override;
  void sleep_for(double seconds) override;

 private:
  std::chrono::steady_clock::time_point origin_ = std::chrono::steady_clock::now();
};

class SimulatedClock final : public Clock {
 public:
  double now() const override { return now_; }
  void sleep_for(double seconds) override {
    if (seconds <= 0) return;
    sleeps_.push_back(seconds);
    now_ += seconds;
  }
  const std::vector<double>& sleeps() const { return sleeps_; }

 private:
  double now_ = 0.0;
  std::vector<double> sleeps_;
};

enum class Outcome { ok, rate_limited_skipped, error };

std::string_view to_string(Outcome o);

struct TransportResult {
  int status = 0;
  std::string body;
  Outcome outcome = Outcome::error;
  std::string diagnostic;

  bool ok() const { return outcome == Outcome::ok; }
};

/// One physical request, as issued.
struct CallRecord {
  std::string host;
  std::string url;
  double started_at = 0.0;
  int status = 0;
};

inline constexpr std::string_view kBrowserUserAgent =
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7) AppleWebKit/537.36 "
    "(KHTML, like Gecko) Chrome/124.0.0.0 Safari/537.36";
inline constexpr std::string_view kBrowserAcceptLanguage = "en-US,en;q=0.9";
inline constexpr std::string_view kToolUserAgent =
    "citescope/1.0 (citation mapping tool; offline-capable)";

/// The single choke point for HTTP traffic. Serializes requests, enforces the
/// per-host minimum gap between request starts, and runs the 429 state
/// machine. Never throws on network trouble; callers read the outcome.
class Transport {
 public:
  Transport(Backend& backend, Clock& clock) : backend_(backend), clock_(clock) {}

  TransportResult get(const std::string& url, const HostPolicy& policy);

  void set_browser_user_agent(std::string ua) { browser_ua_ = std::move(ua); }

  const std::vector<CallRecord>& call_log() const { return log_; }
  std::size_t calls_to(std::string_view host) const;
  Clock& clock() { return clock_; }

 private:
  RawResponse issue(const std::string& url, const std::string& host, const HostPolicy& policy);

  Backend& backend_;
  Clock& clock_;
  std::string browser_ua_{kBrowserUserAgent};
  std::map<std::string, double, std::less<>> last_start_;
  std::vector<CallRecord> log_;
};

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plays back a recorded corpus. `manifest.json` maps URLs to
/// {"file": <path relative to corpus>, "status": <int or [int, ...]>}.
/// A status list is served in order, one per request, the last repeating.
/// Manifest keys are normalized on load, so parameter order does not matter.
/// Unmapped URLs get 404 with an empty body.
class FixtureBackend final : public Backend {
 public:
  explicit FixtureBackend(const std::filesystem::path& corpus_dir);

  RawResponse fetch(const Request& request) override;

  const std::vector<Request>& requests() const { return requests_; }
  std::size_t entry_count() const { return entries_.size(); }

 private:
  struct Entry {
    std::string body;
    std::vector<int> statuses;
    std::size_t served = 0;
  };
  std::map<std::string, Entry> entries_;
  std::vector<Request> requests_;
};

/// HTTPS backend. Returns nullptr when the build has no TLS support.
std::unique_ptr<Backend> make_live_backend();

}  // namespace citescope
