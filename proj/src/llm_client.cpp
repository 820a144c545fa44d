// SPDX-License-Identifier: Apache-2.0
#include "pave/llm_client.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "pave/errors.hpp"

// Stub completion rules live in stub_backend.cpp.
namespace pave::detail {
std::string stub_complete(const std::vector<ChatMessage>& messages);
}

#include "httplib.h"

namespace pave {

std::string role_name(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

BackendConfig BackendConfig::from_env(BackendKind kind) {
    BackendConfig cfg;
    cfg.kind = kind;
    if (const char* v = std::getenv("PAVE_LLM_ENDPOINT")) cfg.endpoint = v;
    if (const char* v = std::getenv("PAVE_LLM_API_KEY")) cfg.api_key = v;
    if (const char* v = std::getenv("PAVE_LLM_MODEL")) cfg.model = v;
    return cfg;
}

std::string request_hash(const std::vector<ChatMessage>& messages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages) {
        arr.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    }
    const std::string canonical = arr.dump();

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

void require_messages(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) throw PreconditionError("complete: messages must be nonempty");
    if (messages.back().role != Role::User) {
        throw PreconditionError("complete: last message must have role USER");
    }
    for (const auto& m : messages) {
        if (m.content.empty()) throw PreconditionError("complete: message content must be nonempty");
    }
}

class StubBackend final : public Backend {
  public:
    std::string complete(const std::vector<ChatMessage>& messages) override {
        require_messages(messages);
        return detail::stub_complete(messages);
    }
};

class ReplayBackend final : public Backend {
  public:
    explicit ReplayBackend(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

    std::string complete(const std::vector<ChatMessage>& messages) override {
        require_messages(messages);
        const std::string hash = request_hash(messages);
        const std::filesystem::path path = std::filesystem::path(dir_) / (hash + ".json");
        std::ifstream in(path);
        if (!in) {
            throw MissingFixtureError("no replay fixture for request " + hash + " in " + dir_,
                                      hash);
        }
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("fixture " + path.string() + ": " + e.what());
        }
        if (!doc.contains("reply") || !doc.at("reply").is_string()) {
            throw ParseError("fixture " + path.string() + ": missing string 'reply'");
        }
        return doc.at("reply").get<std::string>();
    }

  private:
    std::string dir_;
};

class HttpBackend final : public Backend {
  public:
    explicit HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.endpoint.empty()) {
            throw PreconditionError("HTTP backend requires an endpoint");
        }
    }

    std::string complete(const std::vector<ChatMessage>& messages) override {
        require_messages(messages);
        nlohmann::json body;
        body["model"] = cfg_.model.empty() ? "default" : cfg_.model;
        auto& arr = body["messages"] = nlohmann::json::array();
        for (const auto& m : messages) {
            arr.push_back({{"role", role_name(m.role)}, {"content", m.content}});
        }
        const std::string payload = body.dump();

        std::string last_error;
        for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
            httplib::Client client(cfg_.endpoint);
            client.set_read_timeout(120, 0);
            httplib::Headers headers;
            if (!cfg_.api_key.empty()) {
                headers.emplace("Authorization", "Bearer " + cfg_.api_key);
            }
            auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
            if (!res) {
                last_error = "transport failure: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500) {
                last_error = "server error " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw TransportError("chat completion returned status " +
                                     std::to_string(res->status) + " (request " +
                                     request_hash(messages) + ")");
            }
            try {
                const auto doc = nlohmann::json::parse(res->body);
                return doc.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(std::string("malformed chat completion response: ") + e.what());
            }
        }
        throw TransportError("chat completion failed after " + std::to_string(cfg_.max_retries) +
                             " retries: " + last_error + " (request " + request_hash(messages) +
                             ")");
    }

  private:
    BackendConfig cfg_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    switch (config.kind) {
        case BackendKind::Stub: return std::make_unique<StubBackend>();
        case BackendKind::Replay:
            if (config.fixture_dir.empty()) {
                throw PreconditionError("REPLAY backend requires fixture_dir");
            }
            return std::make_unique<ReplayBackend>(config.fixture_dir);
        case BackendKind::Http: return std::make_unique<HttpBackend>(config);
    }
    throw PreconditionError("unknown backend kind");
}

std::string complete(const BackendConfig& config, const std::vector<ChatMessage>& messages) {
    return make_backend(config)->complete(messages);
}

void record(const BackendConfig& config, const std::vector<ChatMessage>& messages,
            const std::string& reply) {
    if (config.kind != BackendKind::Replay || config.fixture_dir.empty()) {
        throw PreconditionError("record requires a REPLAY backend with fixture_dir");
    }
    std::error_code ec;
    std::filesystem::create_directories(config.fixture_dir, ec);
    const std::string hash = request_hash(messages);
    const std::filesystem::path path =
        std::filesystem::path(config.fixture_dir) / (hash + ".json");
    nlohmann::json doc{{"request_hash", hash}, {"reply", reply}};
    std::ofstream out(path);
    if (!out) throw WriteError("cannot write fixture " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw WriteError("failed writing fixture " + path.string());
}

}  // namespace pave
