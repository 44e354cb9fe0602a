#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "nsvif/error.hpp"
#include "nsvif/gateway.hpp"

using namespace nsvif;
namespace fs = std::filesystem;

namespace {

ChatRequest request(const std::string& user) {
  ChatRequest r;
  r.model = "m";
  r.system = "s";
  r.user = user;
  return r;
}

std::shared_ptr<CallbackBackend> echo() {
  return std::make_shared<CallbackBackend>([](const ChatRequest& r) {
    ChatResponse out;
    out.text = "echo: " + r.user;
    out.usage = {static_cast<std::int64_t>(r.user.size()), 2};
    return out;
  });
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("gateway") {
  TEST_CASE("fingerprint is sha256 over the canonical request") {
    // sha256 of {"model":"m","system":"s","temperature":0.2,"user":"u"}
    CHECK(request_fingerprint(request("u")) == "be1f0ac457b7ba856d8b0e40330fbf2c7c4ddf71cb7f665df679ae7007c57c8b");
    ChatRequest capped = request("u");
    capped.max_tokens = 100;
    CHECK(request_fingerprint(capped) == request_fingerprint(request("u")));
    ChatRequest hot = request("u");
    hot.temperature = 0.7;
    CHECK(request_fingerprint(hot) != request_fingerprint(request("u")));
  }

  TEST_CASE("record then replay without a backend") {
    const auto dir = fresh_dir("nsvif_gateway_rr");
    const auto path = dir / "cassette.json";
    auto backend = echo();
    {
      Gateway g(GatewayMode::record, backend, path);
      CHECK(g.complete(request("one")).text == "echo: one");
      CHECK(g.complete(request("two")).text == "echo: two");
      CHECK(g.complete(request("one")).text == "echo: one");
      CHECK(backend->calls() == 2);
      CHECK(g.cassette().size() == 2);
    }
    Gateway replay(GatewayMode::replay, nullptr, path);
    const ChatResponse r = replay.complete(request("two"));
    CHECK(r.text == "echo: two");
    CHECK(r.backend == BackendKind::replay);
    CHECK(r.usage == TokenUsage{3, 2});
    CHECK(replay.backend_calls() == 0);
    try {
      replay.complete(request("three"));
      FAIL("expected a replay miss");
    } catch (const ReplayMissError& e) {
      CHECK(e.fingerprint() == request_fingerprint(request("three")));
    }
    fs::remove_all(dir);
  }

  TEST_CASE("cassette keeps first entries and order") {
    Cassette c;
    CHECK(c.append({"f1", request("a"), "A", {}}));
    CHECK_FALSE(c.append({"f1", request("a"), "B", {}}));
    CHECK(c.append({"f0", request("b"), "C", {}}));
    REQUIRE(c.find("f1"));
    CHECK(c.find("f1")->response == "A");
    CHECK(c.entries()[1].fingerprint == "f0");
    const auto dir = fresh_dir("nsvif_gateway_cassette");
    c.save(dir / "c.json");
    const Cassette back = Cassette::load(dir / "c.json");
    CHECK(back.size() == 2);
    CHECK(back.entries()[0].response == "A");
    fs::remove_all(dir);
  }

  TEST_CASE("live mode always calls the backend") {
    auto backend = echo();
    Gateway g(GatewayMode::live, backend);
    g.complete(request("x"));
    g.complete(request("x"));
    CHECK(backend->calls() == 2);
  }

  TEST_CASE("concurrent identical requests share one backend call while recording") {
    const auto dir = fresh_dir("nsvif_gateway_conc");
    std::atomic<int> calls{0};
    auto slow = std::make_shared<CallbackBackend>([&](const ChatRequest& r) {
      ++calls;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      ChatResponse out;
      out.text = r.user;
      return out;
    });
    Gateway g(GatewayMode::record, slow, dir / "cassette.json");
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i) threads.emplace_back([&] { CHECK(g.complete(request("same")).text == "same"); });
    for (auto& t : threads) t.join();
    CHECK(calls == 1);
    fs::remove_all(dir);
  }

  TEST_CASE("mode requirements") {
    CHECK_THROWS(Gateway(GatewayMode::replay, nullptr));
    CHECK_THROWS(Gateway(GatewayMode::live, nullptr));
  }

  TEST_CASE("live HTTP backend retries and then fails with a transport error") {
    HttpBackendOptions o;
    o.base_url = "http://127.0.0.1:9";
    o.max_retries = 1;
    o.initial_backoff = std::chrono::milliseconds(1);
    o.timeout = std::chrono::seconds(2);
    HttpChatBackend b(o);
    CHECK_THROWS_AS(b.complete(request("x")), TransportError);
  }
}
