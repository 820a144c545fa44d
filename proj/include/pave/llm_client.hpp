// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace pave {

enum class Role { System, User, Assistant };

std::string role_name(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

enum class BackendKind { Stub, Replay, Http };

struct BackendConfig {
    BackendKind kind = BackendKind::Stub;
    std::string endpoint;     // HTTP: base URL of an OpenAI-compatible server
    std::string model;
    std::string api_key;
    std::string fixture_dir;  // REPLAY: directory of recorded replies
    int max_retries = 3;

    /// Fills endpoint/api_key/model from PAVE_LLM_ENDPOINT,
    /// PAVE_LLM_API_KEY and PAVE_LLM_MODEL when they are set.
    static BackendConfig from_env(BackendKind kind);
};

/// Uniform text-completion interface. Implementations never mutate the
/// message list and must tolerate concurrent complete() calls.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

/// One-shot completion through a temporary backend.
std::string complete(const BackendConfig& config, const std::vector<ChatMessage>& messages);

/// Stores a fixture so a REPLAY backend returns reply verbatim for this
/// message list. Last write wins.
void record(const BackendConfig& config, const std::vector<ChatMessage>& messages,
            const std::string& reply);

/// Stable key for a message list: SHA-256 of its canonical JSON form.
std::string request_hash(const std::vector<ChatMessage>& messages);

}  // namespace pave
