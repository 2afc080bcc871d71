// Remote backends against a loopback HTTP server: wire format, retry policy,
// error taxonomy, credential scrubbing.

#include <doctest.h>

#include <atomic>
#include <httplib.h>
#include <json.hpp>
#include <thread>

#include "tiermem/chat.hpp"
#include "tiermem/embedder.hpp"
#include "tiermem/error.hpp"

using namespace tiermem;
using nlohmann::json;

namespace {

class LoopbackServer {
public:
    explicit LoopbackServer(httplib::Server::Handler chat_handler,
                            httplib::Server::Handler embed_handler = nullptr) {
        if (chat_handler) server_.Post("/v1/chat/completions", std::move(chat_handler));
        if (embed_handler) server_.Post("/v1/embeddings", std::move(embed_handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LoopbackServer() {
        server_.stop();
        thread_.join();
    }

    RemoteEndpoint endpoint() const {
        RemoteEndpoint ep;
        ep.base_url = "http://127.0.0.1:" + std::to_string(port_);
        ep.model = "test-model";
        ep.api_key_env = "TIERMEM_REMOTE_TEST_KEY";
        ep.timeout_ms = 2000;
        return ep;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string chat_body(const std::string& content, const std::string& finish = "stop") {
    const json j = {
        {"choices",
         json::array({json{{"finish_reason", finish},
                           {"message", json{{"role", "assistant"}, {"content", content}}}}})},
    };
    return j.dump();
}

}  // namespace

TEST_CASE("http chat backend sends the chat-completions schema and parses the reply") {
    json seen_body;
    std::string seen_auth;
    LoopbackServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_body = json::parse(req.body);
        if (req.has_header("Authorization")) seen_auth = req.get_header_value("Authorization");
        res.set_content(chat_body("hello from server"), "application/json");
    });

    setenv("TIERMEM_REMOTE_TEST_KEY", "sk-test-123", 1);
    HttpChatBackend backend(server.endpoint());
    GenParams params;
    params.temperature = 0.25;
    params.max_tokens = 128;
    const auto reply = backend.complete(
        {{ChatRole::System, "sys"}, {ChatRole::User, "hi"}}, params);
    unsetenv("TIERMEM_REMOTE_TEST_KEY");

    CHECK(reply == "hello from server");
    CHECK(seen_body.at("model") == "test-model");
    CHECK(seen_body.at("temperature").get<double>() == doctest::Approx(0.25));
    CHECK(seen_body.at("max_tokens").get<int>() == 128);
    REQUIRE(seen_body.at("messages").size() == 2);
    CHECK(seen_body["messages"][0]["role"] == "system");
    CHECK(seen_body["messages"][1]["content"] == "hi");
    CHECK(seen_auth == "Bearer sk-test-123");
}

TEST_CASE("http chat backend retries 5xx and then fails as BackendUnavailable") {
    std::atomic<int> hits{0};
    LoopbackServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
    });
    HttpChatBackend backend(server.endpoint());
    CHECK_THROWS_WITH_AS(backend.complete({{ChatRole::User, "hi"}}, GenParams{}),
                         doctest::Contains("BackendUnavailable"), Error);
    CHECK(hits == 3);
}

TEST_CASE("http chat backend recovers when a retry succeeds") {
    std::atomic<int> hits{0};
    LoopbackServer server([&](const httplib::Request&, httplib::Response& res) {
        if (++hits < 3) {
            res.status = 503;
            return;
        }
        res.set_content(chat_body("eventually fine"), "application/json");
    });
    HttpChatBackend backend(server.endpoint());
    CHECK(backend.complete({{ChatRole::User, "hi"}}, GenParams{}) == "eventually fine");
    CHECK(hits == 3);
}

TEST_CASE("http chat backend maps auth and truncation errors") {
    SUBCASE("401 -> AuthError, no retry, message never leaks the key") {
        std::atomic<int> hits{0};
        LoopbackServer server([&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 401;
        });
        setenv("TIERMEM_REMOTE_TEST_KEY", "sk-do-not-leak", 1);
        HttpChatBackend backend(server.endpoint());
        try {
            backend.complete({{ChatRole::User, "hi"}}, GenParams{});
            FAIL("expected AuthError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::auth_error);
            CHECK(std::string(e.what()).find("sk-do-not-leak") == std::string::npos);
        }
        unsetenv("TIERMEM_REMOTE_TEST_KEY");
        CHECK(hits == 1);
    }
    SUBCASE("finish_reason length -> ResponseTruncated") {
        LoopbackServer server([&](const httplib::Request&, httplib::Response& res) {
            res.set_content(chat_body("partial", "length"), "application/json");
        });
        HttpChatBackend backend(server.endpoint());
        CHECK_THROWS_WITH_AS(backend.complete({{ChatRole::User, "hi"}}, GenParams{}),
                             doctest::Contains("ResponseTruncated"), Error);
    }
}

TEST_CASE("remote embedder speaks the embeddings schema and re-normalizes") {
    json seen_body;
    LoopbackServer server(nullptr, [&](const httplib::Request& req, httplib::Response& res) {
        seen_body = json::parse(req.body);
        const json j = {{"data", json::array({json{{"embedding", {3.0, 4.0, 0.0, 0.0}}}})}};
        res.set_content(j.dump(), "application/json");
    });

    RemoteEmbedder embedder(server.endpoint(), 4);
    const auto v = embedder.embed("some text");
    REQUIRE(v.size() == 4);
    CHECK(v[0] == doctest::Approx(0.6));
    CHECK(v[1] == doctest::Approx(0.8));
    CHECK(seen_body.at("model") == "test-model");
    CHECK(seen_body.at("input").at(0) == "some text");
}

TEST_CASE("remote embedder rejects wrong dimensions") {
    LoopbackServer server(nullptr, [&](const httplib::Request&, httplib::Response& res) {
        const json j = {{"data", json::array({json{{"embedding", {1.0, 0.0}}}})}};
        res.set_content(j.dump(), "application/json");
    });
    RemoteEmbedder embedder(server.endpoint(), 4);
    CHECK_THROWS_WITH_AS(embedder.embed("x"), doctest::Contains("DimensionMismatch"), Error);
}
