// Copyright 2026 The kgwalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "common/error.h"
#include "httplib.h"
#include "json.hpp"
#include "llm/backend.h"
#include "llm/batch.h"

namespace kgwalk {
namespace {

TEST(MockBackend, ConstantAndEcho) {
  MockBackend constant(MockBackend::Mode::kConstant, "A");
  MockBackend echo(MockBackend::Mode::kEcho, "");
  for (const char* id : {"x", "y"}) {
    EXPECT_EQ(constant.Generate({id, "prompt"}).text, "A");
  }
  EXPECT_EQ(echo.Generate({"x", "hello\n"}).text, "hello\n");
}

TEST(ReplayBackend, LookupAndMiss) {
  auto replay = ReplayBackend::FromJsonl(
      "{\"item_id\":\"q17\",\"text\":\"B. exercise\"}\n"
      "{\"item_id\":\"q18\",\"text\":\"  padded  \"}\n",
      "inline");
  EXPECT_EQ(replay->size(), 2u);
  EXPECT_EQ(replay->Generate({"q17", "anything"}).text, "B. exercise");
  EXPECT_EQ(replay->Generate({"q18", ""}).text, "  padded  ");
  try {
    replay->Generate({"q99", ""});
    FAIL();
  } catch (const TransientBackendError&) {
    FAIL() << "a replay miss must be fatal";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBackend);
    EXPECT_NE(std::string(e.what()).find("q99"), std::string::npos);
  }
  EXPECT_THROW(ReplayBackend::FromJsonl("{\"item_id\":\"a\",\"text\":\"x\"}\n"
                                        "{\"item_id\":\"a\",\"text\":\"y\"}\n",
                                        "dup"),
               Error);
}

// Local stub: POST /gen echoes a fixed JSON body; item "fail" gets 503 for
// the first `failures` requests.
class StubServer {
 public:
  StubServer() {
    server_.Post("/gen", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      auto body = nlohmann::json::parse(req.body);
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = body;
      const std::string prompt = body.value("prompt", "");
      if (prompt == "always-503") {
        res.status = 503;
        return;
      }
      if (prompt == "bad-request") {
        res.status = 400;
        return;
      }
      if (prompt == "flaky" && flaky_left_ > 0) {
        --flaky_left_;
        res.status = 503;
        return;
      }
      nlohmann::json out;
      out["choices"] = nlohmann::json::array({{{"text", "stub says " + prompt}}});
      out["text"] = "stub says " + prompt;
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/gen"; }

  std::atomic<int> requests_{0};
  std::atomic<int> flaky_left_{0};
  std::string last_auth_;
  nlohmann::json last_body_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpBackend, ParsesStubResponse) {
  StubServer stub;
  HttpBackendOptions o;
  o.url = stub.url();
  ::setenv("KGW_TEST_TOKEN", "sekrit", 1);
  o.headers = {{"Authorization", "Bearer ${KGW_TEST_TOKEN}"}};
  HttpBackend http(o);
  GenResponse r = http.Generate({"i1", "hello", 7, 0.0});
  EXPECT_EQ(r.text, "stub says hello");
  EXPECT_EQ(r.backend, "http");
  EXPECT_EQ(stub.last_auth_, "Bearer sekrit");
  EXPECT_EQ(stub.last_body_["max_new_tokens"], 7);
  EXPECT_EQ(stub.last_body_["temperature"], 0.0);

  o.response_path = "choices.0.text";
  HttpBackend nested(o);
  EXPECT_EQ(nested.Generate({"i2", "x"}).text, "stub says x");
}

TEST(HttpBackend, RetriesWithExponentialBackoff) {
  StubServer stub;
  HttpBackendOptions o;
  o.url = stub.url();
  o.max_attempts = 4;
  o.initial_backoff_ms = 100;
  HttpBackend http(o);
  std::vector<int64_t> sleeps;
  http.set_sleep([&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); });

  stub.flaky_left_ = 2;
  EXPECT_EQ(http.Generate({"f", "flaky"}).text, "stub says flaky");
  EXPECT_EQ(sleeps, (std::vector<int64_t>{100, 200}));

  sleeps.clear();
  stub.requests_ = 0;
  EXPECT_THROW(http.Generate({"f", "always-503"}), TransientBackendError);
  EXPECT_EQ(stub.requests_, 4);
  EXPECT_EQ(sleeps, (std::vector<int64_t>{100, 200, 400}));

  stub.requests_ = 0;
  EXPECT_THROW(http.Generate({"f", "bad-request"}), TransientBackendError);
  EXPECT_EQ(stub.requests_, 1) << "4xx is not retried";
}

TEST(HttpBackend, ConnectionRefusedIsFlaggedNotFatal) {
  HttpBackendOptions o;
  o.url = "http://127.0.0.1:1/gen";
  o.max_attempts = 2;
  o.timeout_ms = 500;
  HttpBackend http(o);
  http.set_sleep([](std::chrono::milliseconds) {});
  EXPECT_THROW(http.Generate({"x", "p"}), TransientBackendError);
  o.url = "ftp://nope";
  EXPECT_THROW(HttpBackend{o}, Error);
}

TEST(ExpandEnv, Substitutes) {
  ::setenv("KGW_TEST_A", "alpha", 1);
  ::unsetenv("KGW_TEST_UNSET");
  EXPECT_EQ(ExpandEnv("x ${KGW_TEST_A} y"), "x alpha y");
  EXPECT_EQ(ExpandEnv("${KGW_TEST_UNSET}"), "");
  EXPECT_EQ(ExpandEnv("no vars"), "no vars");
}

// Sleeps a pseudo-random amount so completions arrive out of order.
class JitterBackend : public Backend {
 public:
  GenResponse Generate(const GenRequest& r) override {
    const int ms = static_cast<int>(std::hash<std::string>{}(r.item_id) % 3);
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    if (r.item_id == fail_id) throw TransientBackendError("stub failure for " + r.item_id);
    return {"answer for " + r.item_id, 0, "jitter"};
  }
  std::string name() const override { return "jitter"; }
  bool deterministic() const override { return true; }
  std::string fail_id;
};

std::vector<GenRequest> Requests(int n) {
  std::vector<GenRequest> out;
  for (int i = 0; i < n; ++i) out.push_back({"item" + std::to_string(i), "p"});
  return out;
}

TEST(RunBatch, ParallelEqualsSerialAndCommitsInOrder) {
  auto replay_lines = std::string();
  for (int i = 0; i < 100; ++i) {
    replay_lines += "{\"item_id\":\"item" + std::to_string(i) + "\",\"text\":\"r" +
                    std::to_string(i) + "\"}\n";
  }
  auto replay = ReplayBackend::FromJsonl(replay_lines, "inline");
  auto reqs = Requests(100);
  auto serial = RunBatch(reqs, *replay, 1);
  auto parallel = RunBatch(reqs, *replay, 8);
  ASSERT_EQ(serial.size(), 100u);
  ASSERT_EQ(parallel.size(), 100u);
  for (size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(serial[i].item_id, parallel[i].item_id);
    EXPECT_EQ(serial[i].response->text, parallel[i].response->text);
  }

  JitterBackend jitter;
  std::vector<size_t> committed;
  RunBatch(Requests(40), jitter, 8, [&](size_t i, const BatchResult&) { committed.push_back(i); });
  ASSERT_EQ(committed.size(), 40u);
  for (size_t i = 0; i < committed.size(); ++i) EXPECT_EQ(committed[i], i);
}

TEST(RunBatch, OneFailingItemAmongTen) {
  JitterBackend jitter;
  jitter.fail_id = "item6";
  auto results = RunBatch(Requests(10), jitter, 4);
  ASSERT_EQ(results.size(), 10u);
  size_t ok = 0;
  for (const auto& r : results) ok += r.ok();
  EXPECT_EQ(ok, 9u);
  EXPECT_FALSE(results[6].ok());
  EXPECT_NE(results[6].error.find("item6"), std::string::npos);
}

TEST(RunBatch, EmptyAndFatal) {
  MockBackend mock(MockBackend::Mode::kConstant, "A");
  EXPECT_TRUE(RunBatch({}, mock, 4).empty());
  EXPECT_THROW(RunBatch(Requests(2), mock, 0), Error);
  auto replay = ReplayBackend::FromJsonl("{\"item_id\":\"item0\",\"text\":\"x\"}\n", "inline");
  EXPECT_THROW(RunBatch(Requests(5), *replay, 3), Error);
}

}  // namespace
}  // namespace kgwalk
