// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "pave/errors.hpp"
#include "pave/llm_client.hpp"

using namespace pave;

namespace {

std::vector<ChatMessage> simple_request(const std::string& text) {
    return {ChatMessage{Role::User, text}};
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("pave_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("message preconditions") {
    auto stub = make_backend(BackendConfig{});
    CHECK_THROWS_AS(stub->complete({}), PreconditionError);
    CHECK_THROWS_AS(stub->complete({{Role::System, "sys"}}), PreconditionError);
    CHECK_THROWS_AS(stub->complete({{Role::User, ""}}), PreconditionError);
}

TEST_CASE("request_hash is stable and injective at test scale") {
    const auto a = simple_request("hello");
    const auto b = simple_request("world");
    CHECK(request_hash(a) == request_hash(a));
    CHECK(request_hash(a) != request_hash(b));
    CHECK(request_hash(a).size() == 64);
}

TEST_CASE("replay: missing fixture names the hash") {
    TempDir dir;
    BackendConfig cfg;
    cfg.kind = BackendKind::Replay;
    cfg.fixture_dir = dir.path.string();
    const auto messages = simple_request("no fixture here");
    try {
        complete(cfg, messages);
        FAIL("expected MissingFixtureError");
    } catch (const MissingFixtureError& e) {
        CHECK(e.request_hash == request_hash(messages));
        CHECK(std::string(e.what()).find(e.request_hash) != std::string::npos);
    }
}

TEST_CASE("replay round-trips recorded replies byte for byte") {
    TempDir dir;
    BackendConfig cfg;
    cfg.kind = BackendKind::Replay;
    cfg.fixture_dir = dir.path.string();

    const auto m1 = simple_request("first request");
    const auto m2 = simple_request("second request");
    record(cfg, m1, "reply one\nwith a second line");
    record(cfg, m2, "reply two");

    CHECK(complete(cfg, m1) == "reply one\nwith a second line");
    CHECK(complete(cfg, m2) == "reply two");

    // distinct requests map to distinct fixture files
    CHECK(std::filesystem::exists(dir.path / (request_hash(m1) + ".json")));
    CHECK(std::filesystem::exists(dir.path / (request_hash(m2) + ".json")));
    CHECK(request_hash(m1) != request_hash(m2));

    // last write wins
    record(cfg, m1, "overwritten");
    CHECK(complete(cfg, m1) == "overwritten");
}

TEST_CASE("record requires a replay config") {
    BackendConfig cfg;  // stub
    CHECK_THROWS_AS(record(cfg, simple_request("x"), "y"), PreconditionError);
}

TEST_CASE("a recorded stub session replays byte-identically") {
    TempDir dir;
    const std::vector<ChatMessage> messages = {
        {Role::System, "You are the task classification stage of a test."},
        {Role::User, "Classify these tasks:\n```json\n[\"need gas then a park\"]\n```"}};

    auto stub = make_backend(BackendConfig{});
    const std::string live = stub->complete(messages);

    BackendConfig replay;
    replay.kind = BackendKind::Replay;
    replay.fixture_dir = dir.path.string();
    record(replay, messages, live);
    CHECK(complete(replay, messages) == live);
}

TEST_CASE("stub is a pure function and does not mutate messages") {
    auto stub = make_backend(BackendConfig{});
    std::vector<ChatMessage> messages = {
        {Role::System, "You are the task classification stage of a test."},
        {Role::User, "Classify these tasks:\n```json\n[\"I'm running out of gas\"]\n```"}};
    const auto copy = messages;
    const std::string r1 = stub->complete(messages);
    const std::string r2 = stub->complete(messages);
    CHECK(r1 == r2);
    REQUIRE(messages.size() == copy.size());
    for (std::size_t i = 0; i < messages.size(); ++i) {
        CHECK(messages[i].content == copy[i].content);
    }
}

TEST_CASE("stub tolerates concurrent complete calls") {
    auto stub = make_backend(BackendConfig{});
    const std::vector<ChatMessage> messages = {
        {Role::System, "You are the task classification stage of a test."},
        {Role::User, "Classify these tasks:\n```json\n[\"need gas then a park\"]\n```"}};
    const std::string expected = stub->complete(messages);

    std::atomic<int> mismatches{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < 8; ++t) {
        workers.emplace_back([&] {
            for (int i = 0; i < 50; ++i) {
                if (stub->complete(messages) != expected) ++mismatches;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches == 0);
}

TEST_CASE("http backend against a local server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        const auto body = nlohmann::json::parse(req.body);
        const std::string user = body.at("messages").back().at("content").get<std::string>();
        nlohmann::json reply{
            {"choices",
             {{{"message", {{"role", "assistant"}, {"content", "echo: " + user}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::Http;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
    cfg.model = "test-model";
    CHECK(complete(cfg, simple_request("ping")) == "echo: ping");
    CHECK(hits == 1);

    server.stop();
    t.join();
}

TEST_CASE("http backend retries transport failures max_retries times") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::Http;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
    cfg.max_retries = 2;
    CHECK_THROWS_AS(complete(cfg, simple_request("ping")), TransportError);
    CHECK(hits == 3);  // initial attempt + two retries

    server.stop();
    t.join();
}

TEST_CASE("http backend fails fast on a client error status") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 401;
        res.set_content("forbidden", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::Http;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
    cfg.max_retries = 3;
    CHECK_THROWS_AS(complete(cfg, simple_request("ping")), TransportError);
    CHECK(hits == 1);

    server.stop();
    t.join();
}
