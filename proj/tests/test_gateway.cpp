#include "faithdebate/gateway.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>
#include <vector>

#include "doctest.h"
#include "faithdebate/errors.hpp"
#include "faithdebate/parallel.hpp"
#include "faithdebate/runlog.hpp"
#include "httplib.h"
#include "support/fixtures.hpp"

using namespace faithdebate;
namespace ft = faithdebate::testing;

namespace {

CompletionRequest request_for(const std::string& tag) {
  CompletionRequest request;
  request.user_text = "prompt";
  request.request_tag = tag;
  return request;
}

}  // namespace

TEST_CASE("scripted backend consumes tag queues in order") {
  ScriptedBackend backend;
  backend.add_response("agent1/round1", "first");
  backend.add_response("agent1/round1", "second");

  auto r1 = backend.complete(request_for("agent1/round1"));
  CHECK(r1.text == "first");
  CHECK(r1.attempt == 1);
  CHECK(r1.backend_id == "scripted");
  CHECK(backend.complete(request_for("agent1/round1")).text == "second");

  // Exhaustion after the queue empties.
  CHECK_THROWS_AS(backend.complete(request_for("agent1/round1")), Error);
  try {
    backend.complete(request_for("agent1/round1"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScriptedExhausted);
  }
}

TEST_CASE("scripted backend patterns and repeating entries") {
  ScriptedBackend backend;
  backend.add_response("rec1/s0/r1/a0", "exact");
  backend.add_repeating("rec1/*", "wild");

  CHECK(backend.complete(request_for("rec1/s0/r1/a0")).text == "exact");
  // Exact queue exhausted; the pattern takes over and never runs out.
  CHECK(backend.complete(request_for("rec1/s0/r1/a0")).text == "wild");
  CHECK(backend.complete(request_for("rec1/s0/r2/a3")).text == "wild");
  CHECK(backend.complete(request_for("rec1/s0/r2/a3")).text == "wild");
  CHECK_THROWS_AS(backend.complete(request_for("rec2/s0/r1/a0")), Error);
}

TEST_CASE("scripted backend spec round-trips through JSON") {
  nlohmann::json spec = {
      {"responses",
       {{"a/b", nlohmann::json::array({"one", "two"})}, {"c/*", "forever"}}}};
  auto backend = ScriptedBackend::from_json(spec);
  CHECK(backend->complete(request_for("a/b")).text == "one");
  CHECK(backend->complete(request_for("c/x")).text == "forever");
  CHECK(backend->complete(request_for("c/y")).text == "forever");

  CHECK_THROWS_AS(ScriptedBackend::from_json(nlohmann::json::array()), Error);
  CHECK_THROWS_AS(
      ScriptedBackend::from_json({{"responses", {{"t", 42}}}}), Error);
}

TEST_CASE("request validation") {
  ScriptedBackend backend;
  backend.add_repeating("*", "x");
  CompletionRequest request;
  request.request_tag = "t";
  CHECK_THROWS_AS(backend.complete(request), Error);  // empty user_text
  request.user_text = "p";
  request.temperature = -0.5;
  CHECK_THROWS_AS(backend.complete(request), Error);
  request.temperature = 0.0;
  request.max_tokens = 0;
  CHECK_THROWS_AS(backend.complete(request), Error);
}

TEST_CASE("every attempt lands in the run log exactly once") {
  std::string dir = ft::fresh_dir("gateway_log");
  RunLog log(dir, "run1", nlohmann::ordered_json::object());
  ScriptedBackend backend;
  backend.add_response("t1", "a");
  backend.add_response("t1", "b");
  backend.set_run_log(&log);

  backend.complete(request_for("t1"));
  backend.complete(request_for("t1"));

  auto entries = replay_runlog(dir, "run1");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].component == "gateway");
  CHECK(entries[0].payload.at("attempt") == 1);
  CHECK(entries[0].payload.at("outcome") == "ok");
  CHECK(entries[1].payload.at("attempt") == 1);
}

TEST_CASE("rate limiter bounds in-flight requests") {
  struct CountingGateway : Gateway {
    std::atomic<int> current{0};
    std::atomic<int> peak{0};
    std::atomic<int> calls{0};

    CompletionResponse complete(const CompletionRequest&) override {
      int now = ++current;
      int seen = peak.load();
      while (now > seen && !peak.compare_exchange_weak(seen, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      --current;
      ++calls;
      return {"ok", "counting", 0, 1};
    }
  };

  auto inner = std::make_shared<CountingGateway>();
  RateLimitedGateway limited(inner, 4, 100000);

  parallel_for(12, true, [&](int i) {
    limited.complete(request_for("t" + std::to_string(i)));
  });
  CHECK(inner->calls.load() == 12);
  CHECK(inner->peak.load() <= 4);

  SUBCASE("limit of one serializes") {
    auto solo = std::make_shared<CountingGateway>();
    RateLimitedGateway serialized(solo, 1, 100000);
    parallel_for(6, true, [&](int i) {
      serialized.complete(request_for("s" + std::to_string(i)));
    });
    CHECK(solo->peak.load() == 1);
  }
}

TEST_CASE("rate limiter enforces the per-minute window") {
  struct InstantGateway : Gateway {
    CompletionResponse complete(const CompletionRequest&) override {
      return {"ok", "instant", 0, 1};
    }
  };

  auto now = std::make_shared<std::chrono::steady_clock::time_point>(
      std::chrono::steady_clock::time_point{});
  std::vector<std::chrono::milliseconds> waits;
  RateLimitedGateway limited(
      std::make_shared<InstantGateway>(), 8, 60,
      [now] { return *now; },
      [now, &waits](std::chrono::milliseconds wait) {
        waits.push_back(wait);
        *now += wait;
      });

  for (int i = 0; i < 60; ++i) {
    limited.complete(request_for("w" + std::to_string(i)));
  }
  CHECK(waits.empty());

  // 61st instantaneous request must wait out the whole window remainder.
  limited.complete(request_for("w60"));
  REQUIRE(!waits.empty());
  CHECK(waits.front() >= std::chrono::milliseconds(60000));

  SUBCASE("rejects non-positive limits") {
    CHECK_THROWS_AS(
        RateLimitedGateway(std::make_shared<InstantGateway>(), 0, 1), Error);
    CHECK_THROWS_AS(
        RateLimitedGateway(std::make_shared<InstantGateway>(), 1, 0), Error);
  }
}

TEST_CASE("http backend retries transient failures and reports the attempt") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions",
              [&](const httplib::Request&, httplib::Response& res) {
                if (++hits == 1) {
                  res.status = 500;
                  res.set_content("overloaded", "text/plain");
                  return;
                }
                nlohmann::json reply = {
                    {"choices",
                     {{{"message",
                        {{"role", "assistant"},
                         {"content", "<label>1</label>"}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpBackendConfig config;
  config.base_url = "http://127.0.0.1:" + std::to_string(port);
  config.model = "test-model";
  config.api_key_env = "";
  config.retries = 3;
  config.backoff_ms = 1;
  HttpBackend backend(config);

  auto response = backend.complete(request_for("r1"));
  CHECK(response.text == "<label>1</label>");
  CHECK(response.attempt == 2);
  CHECK(hits.load() == 2);

  server.stop();
  server_thread.join();
}

TEST_CASE("http backend auth failures are not retried") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions",
              [&](const httplib::Request&, httplib::Response& res) {
                ++hits;
                res.status = 401;
                res.set_content("no", "text/plain");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpBackendConfig config;
  config.base_url = "http://127.0.0.1:" + std::to_string(port);
  config.api_key_env = "";
  config.retries = 3;
  config.backoff_ms = 1;
  HttpBackend backend(config);

  try {
    backend.complete(request_for("r1"));
    FAIL("expected AuthError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AuthError);
  }
  CHECK(hits.load() == 1);

  server.stop();
  server_thread.join();
}

TEST_CASE("http backend demands its credential up front") {
  unsetenv("FD_TEST_MISSING_KEY");
  HttpBackendConfig config;
  config.base_url = "http://127.0.0.1:1";
  config.api_key_env = "FD_TEST_MISSING_KEY";
  try {
    HttpBackend backend(config);
    FAIL("expected AuthError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AuthError);
  }
}

TEST_CASE("http backend gives up after the retry budget") {
  HttpBackendConfig config;
  // Nothing listens here; every attempt is a transport error.
  config.base_url = "http://127.0.0.1:9";
  config.api_key_env = "";
  config.retries = 2;
  config.backoff_ms = 1;
  config.timeout_s = 1;
  HttpBackend backend(config);
  try {
    backend.complete(request_for("r1"));
    FAIL("expected BackendUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendUnavailable);
  }
}
