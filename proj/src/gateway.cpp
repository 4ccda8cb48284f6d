#include "faithdebate/gateway.hpp"

#include <fstream>
#include <thread>

#include "faithdebate/errors.hpp"
#include "faithdebate/runlog.hpp"

namespace faithdebate {

void CompletionRequest::validate() const {
  if (user_text.empty()) {
    raise(ErrorCode::InvalidArgument, "completion request needs user text");
  }
  if (temperature < 0.0) {
    raise(ErrorCode::InvalidArgument, "temperature must be >= 0");
  }
  if (max_tokens <= 0) {
    raise(ErrorCode::InvalidArgument, "max_tokens must be > 0");
  }
}

void Gateway::log_attempt(const CompletionRequest& request, int attempt,
                          const std::string& outcome,
                          const std::string& detail, std::int64_t latency_ms) {
  if (!run_log_) return;
  nlohmann::ordered_json payload;
  payload["tag"] = request.request_tag;
  payload["attempt"] = attempt;
  payload["outcome"] = outcome;
  payload["prompt"] = request.user_text;
  payload["detail"] = detail;
  payload["latency_ms"] = latency_ms;
  run_log_->append(request.request_tag, "gateway", std::move(payload));
}

namespace {

// Glob with '*' as the only metacharacter (matches any run, '/' included).
bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() &&
        (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

void ScriptedBackend::add_response(const std::string& tag, std::string text) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& table = tag.find('*') != std::string::npos ? patterns_ : exact_;
  table[tag].queue.push_back(std::move(text));
}

void ScriptedBackend::add_repeating(const std::string& pattern,
                                    std::string text) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& table = pattern.find('*') != std::string::npos ? patterns_ : exact_;
  table[pattern].repeating = std::move(text);
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json(
    const nlohmann::json& spec) {
  auto backend = std::make_shared<ScriptedBackend>();
  if (!spec.is_object() || !spec.contains("responses") ||
      !spec["responses"].is_object()) {
    raise(ErrorCode::SchemaError,
          "scripted spec must be an object with a 'responses' object");
  }
  for (const auto& [key, value] : spec["responses"].items()) {
    if (value.is_string()) {
      backend->add_repeating(key, value.get<std::string>());
    } else if (value.is_array()) {
      for (const auto& item : value) {
        if (!item.is_string()) {
          raise(ErrorCode::SchemaError,
                "scripted responses for '" + key + "' must be strings");
        }
        backend->add_response(key, item.get<std::string>());
      }
    } else {
      raise(ErrorCode::SchemaError,
            "scripted responses for '" + key +
                "' must be a string or an array of strings");
    }
  }
  return backend;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open scripted backend spec: " + path);
  }
  nlohmann::json spec = nlohmann::json::parse(in, nullptr, false);
  if (spec.is_discarded()) {
    raise(ErrorCode::SchemaError, "scripted backend spec is not valid JSON: " +
                                      path);
  }
  return from_json(spec);
}

CompletionResponse ScriptedBackend::complete(
    const CompletionRequest& request) {
  request.validate();
  std::string text;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++calls_;
    Entry* hit = nullptr;
    auto it = exact_.find(request.request_tag);
    if (it != exact_.end() &&
        (!it->second.queue.empty() || it->second.repeating)) {
      hit = &it->second;
    } else {
      for (auto& [pattern, entry] : patterns_) {
        if (!glob_match(pattern, request.request_tag)) continue;
        if (entry.queue.empty() && !entry.repeating) continue;
        hit = &entry;
        break;
      }
    }
    if (!hit) {
      raise(ErrorCode::ScriptedExhausted,
            "no scripted response left for tag '" + request.request_tag + "'");
    }
    if (!hit->queue.empty()) {
      text = std::move(hit->queue.front());
      hit->queue.pop_front();
    } else {
      text = *hit->repeating;
    }
  }
  CompletionResponse response;
  response.text = std::move(text);
  response.backend_id = "scripted";
  response.latency_ms = 0;
  response.attempt = 1;
  log_attempt(request, 1, "ok", "scripted", 0);
  return response;
}

int ScriptedBackend::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

RateLimitedGateway::RateLimitedGateway(std::shared_ptr<Gateway> inner,
                                       int max_in_flight, int max_per_minute,
                                       Clock clock, Sleeper sleeper)
    : inner_(std::move(inner)),
      max_in_flight_(max_in_flight),
      max_per_minute_(max_per_minute),
      clock_(std::move(clock)),
      sleeper_(std::move(sleeper)) {
  if (max_in_flight_ <= 0 || max_per_minute_ <= 0) {
    raise(ErrorCode::InvalidConfig, "rate limits must be > 0");
  }
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }
}

void RateLimitedGateway::acquire() {
  constexpr auto kWindow = std::chrono::seconds(60);
  std::unique_lock<std::mutex> lock(mutex_);
  slot_free_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
  for (;;) {
    auto now = clock_();
    while (!window_.empty() && now - window_.front() >= kWindow) {
      window_.pop_front();
    }
    if (window_.size() < static_cast<std::size_t>(max_per_minute_)) break;
    auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
        kWindow - (now - window_.front()));
    if (wait.count() < 1) wait = std::chrono::milliseconds(1);
    lock.unlock();
    sleeper_(wait);
    lock.lock();
  }
  window_.push_back(clock_());
  ++in_flight_;
}

void RateLimitedGateway::release() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    --in_flight_;
  }
  slot_free_.notify_one();
}

CompletionResponse RateLimitedGateway::complete(
    const CompletionRequest& request) {
  acquire();
  try {
    CompletionResponse response = inner_->complete(request);
    release();
    return response;
  } catch (...) {
    release();
    throw;
  }
}

}  // namespace faithdebate
