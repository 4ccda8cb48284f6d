#include <chrono>
#include <cstdlib>
#include <thread>

#include "faithdebate/errors.hpp"
#include "faithdebate/gateway.hpp"
#include "faithdebate/rng.hpp"
#include "httplib.h"

namespace faithdebate {

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)), jitter_state_(config_.jitter_seed) {
  if (config_.base_url.empty()) {
    raise(ErrorCode::InvalidConfig, "http backend needs a base_url");
  }
  if (config_.retries < 1) {
    raise(ErrorCode::InvalidConfig, "http backend needs retries >= 1");
  }
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) {
      raise(ErrorCode::AuthError,
            "credential env var " + config_.api_key_env + " is not set");
    }
    api_key_ = key;
  }
  host_ = config_.base_url;
  while (!host_.empty() && host_.back() == '/') host_.pop_back();
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
  request.validate();

  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array();
  if (!request.system_text.empty()) {
    body["messages"].push_back(
        {{"role", "system"}, {"content", request.system_text}});
  }
  body["messages"].push_back(
      {{"role", "user"}, {"content", request.user_text}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  if (request.top_p) body["top_p"] = *request.top_p;
  std::string payload = body.dump();

  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }

  std::string last_error;
  for (int attempt = 1; attempt <= config_.retries; ++attempt) {
    auto started = std::chrono::steady_clock::now();
    httplib::Client client(host_);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    client.set_write_timeout(config_.timeout_s, 0);

    auto result = client.Post(config_.completions_path, headers, payload,
                              "application/json");
    auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    bool retryable = false;
    if (!result) {
      last_error = "transport: " + httplib::to_string(result.error());
      retryable = true;
    } else if (result->status == 401 || result->status == 403) {
      log_attempt(request, attempt, "auth_error", result->body, latency);
      raise(ErrorCode::AuthError, "backend rejected credential (status " +
                                      std::to_string(result->status) + ")");
    } else if (result->status == 200) {
      nlohmann::json reply =
          nlohmann::json::parse(result->body, nullptr, false);
      if (!reply.is_discarded() && reply.contains("choices") &&
          reply["choices"].is_array() && !reply["choices"].empty() &&
          reply["choices"][0].contains("message") &&
          reply["choices"][0]["message"].contains("content")) {
        CompletionResponse response;
        response.text =
            reply["choices"][0]["message"]["content"].get<std::string>();
        response.backend_id = "http:" + config_.model;
        response.latency_ms = latency;
        response.attempt = attempt;
        log_attempt(request, attempt, "ok", "", latency);
        return response;
      }
      last_error = "malformed completion body";
      retryable = true;
    } else {
      last_error = "status " + std::to_string(result->status);
      retryable = result->status == 408 || result->status == 429 ||
                  result->status >= 500;
      if (!retryable) {
        log_attempt(request, attempt, "error", last_error, latency);
        raise(ErrorCode::BackendUnavailable,
              "backend request failed (" + last_error + ")");
      }
    }
    log_attempt(request, attempt, "retryable_error", last_error, latency);

    if (retryable && attempt < config_.retries) {
      double jitter;
      {
        std::lock_guard<std::mutex> lock(jitter_mutex_);
        Rng rng(jitter_state_++);
        jitter = 0.8 + 0.4 * rng.unit_real();  // +/-20%
      }
      auto backoff = std::chrono::milliseconds(static_cast<std::int64_t>(
          config_.backoff_ms * (1 << (attempt - 1)) * jitter));
      std::this_thread::sleep_for(backoff);
    }
  }
  raise(ErrorCode::BackendUnavailable,
        "backend unavailable after " + std::to_string(config_.retries) +
            " attempts: " + last_error);
}

}  // namespace faithdebate
