#ifndef FAITHDEBATE_GATEWAY_HPP
#define FAITHDEBATE_GATEWAY_HPP

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace faithdebate {

class RunLog;

struct CompletionRequest {
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<double> top_p;
  // Caller context (record/session/round/agent/purpose); used as the lookup
  // key by the scripted backend and as the record id in run-log entries.
  std::string request_tag;

  void validate() const;  // user_text non-empty, temperature >= 0, tokens > 0
};

struct CompletionResponse {
  std::string text;
  std::string backend_id;
  std::int64_t latency_ms = 0;
  int attempt = 1;
};

// Uniform completion interface. Implementations are shareable across
// concurrent tasks; every attempt they make is appended to the attached run
// log before the response is returned.
class Gateway {
 public:
  virtual ~Gateway() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;

  void set_run_log(RunLog* log) { run_log_ = log; }

 protected:
  void log_attempt(const CompletionRequest& request, int attempt,
                   const std::string& outcome, const std::string& detail,
                   std::int64_t latency_ms);

  RunLog* run_log_ = nullptr;
};

// Deterministic backend for tests and replays. Responses are keyed by
// request_tag: exact keys hold an ordered queue consumed one response per
// call; keys containing '*' act as wildcard patterns and may either hold a
// queue or a single endlessly repeated response. Consumption is atomic per
// key.
class ScriptedBackend : public Gateway {
 public:
  void add_response(const std::string& tag, std::string text);
  void add_repeating(const std::string& pattern, std::string text);

  // Spec format: {"responses": {"<tag-or-pattern>": ["first", "second"]
  //                             "<pattern>": "repeated forever"}}
  static std::shared_ptr<ScriptedBackend> from_json(const nlohmann::json& spec);
  static std::shared_ptr<ScriptedBackend> from_file(const std::string& path);

  CompletionResponse complete(const CompletionRequest& request) override;

  int calls() const;

 private:
  struct Entry {
    std::deque<std::string> queue;
    std::optional<std::string> repeating;
  };

  mutable std::mutex mutex_;
  std::map<std::string, Entry> exact_;
  std::map<std::string, Entry> patterns_;
  int calls_ = 0;
};

// Chat-completions HTTP client. Any server speaking the common
// system/user-message request shape with a choices[0].message.content reply
// works; see docs/backends.md for the exact field names.
struct HttpBackendConfig {
  std::string base_url;              // e.g. "http://localhost:8000"
  std::string model;
  std::string completions_path = "/v1/chat/completions";
  std::string api_key_env = "FD_API_KEY";  // empty = no auth header
  int timeout_s = 60;
  int retries = 3;          // total attempts
  int backoff_ms = 1000;    // doubled per retry, +/-20% jitter
  std::uint64_t jitter_seed = 0;
};

class HttpBackend : public Gateway {
 public:
  // Fails fast with AuthError when api_key_env names an unset variable.
  explicit HttpBackend(HttpBackendConfig config);

  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string api_key_;
  std::string host_;
  std::mutex jitter_mutex_;
  std::uint64_t jitter_state_;
};

// Throttling decorator: bounds concurrent in-flight requests and the number
// of requests started per 60-second sliding window. Callers block; no
// request is ever rejected. The clock and sleeper are injectable so the
// waiting behavior can be tested without real time.
class RateLimitedGateway : public Gateway {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  RateLimitedGateway(std::shared_ptr<Gateway> inner, int max_in_flight,
                     int max_per_minute, Clock clock = nullptr,
                     Sleeper sleeper = nullptr);

  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  void acquire();
  void release();

  std::shared_ptr<Gateway> inner_;
  int max_in_flight_;
  int max_per_minute_;
  Clock clock_;
  Sleeper sleeper_;

  std::mutex mutex_;
  std::condition_variable slot_free_;
  int in_flight_ = 0;
  std::deque<std::chrono::steady_clock::time_point> window_;
};

}  // namespace faithdebate

#endif  // FAITHDEBATE_GATEWAY_HPP
