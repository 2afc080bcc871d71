#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tiermem/retrieval.hpp"

namespace tiermem {

enum class ChatRole {
    System,
    User,
    Assistant,
};

std::string_view to_string(ChatRole role);

struct ChatMessage {
    ChatRole role = ChatRole::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct GenParams {
    double temperature = 0.0;
    std::size_t max_tokens = 2048;
    std::uint64_t seed = 0;
};

// Connection settings for remote backends. The API key is never stored in
// config files; only the name of the environment variable holding it is.
struct RemoteEndpoint {
    std::string base_url;
    std::string model;
    std::string api_key_env = "TIERMEM_API_KEY";
    int timeout_ms = 30000;
    int max_inflight = 4;
};

std::string resolve_api_key(const RemoteEndpoint& endpoint);

// A chat-completion service boundary. Implementations are safe for
// concurrent calls.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Single completion for a non-empty message list.
    virtual std::string complete(const std::vector<ChatMessage>& messages,
                                 const GenParams& params) = 0;
};

// Deterministic offline backend: a pure function of (messages, seed). It
// recognizes the prompt shapes this project emits and answers each one in a
// fixed way, so every pipeline stage can run reproducibly with no network:
//
//   - "Options:" prompts  -> the option sharing most tokens with the rest
//                            of the prompt (ties: first listed)
//   - judge prompts       -> verdict token by response/question overlap
//   - prompts carrying a retrieved-knowledge block
//                         -> echoes verbatim the block item that best
//                            overlaps the last user message (ties: first)
//   - self-chat role prompts ("You are the patient/doctor...")
//                         -> cycles deterministically through the profile
//                            sentences embedded in the system message
//   - anything else       -> a fixed fallback template around the last
//                            user message
class MockChatBackend final : public ChatBackend {
public:
    MockChatBackend() = default;

    std::string complete(const std::vector<ChatMessage>& messages,
                         const GenParams& params) override;
};

// HTTP client for the de-facto chat-completions schema:
//   POST {base_url}/v1/chat/completions
//   {"model": ..., "messages": [{"role", "content"}], "temperature", "max_tokens"}
// Transient failures (connection errors, 5xx) retry with exponential backoff
// up to 3 attempts, then BackendUnavailable. 401/403 -> AuthError. A finish
// reason other than "stop" -> ResponseTruncated. In-flight requests are
// bounded by endpoint.max_inflight. Error text never contains credentials.
class HttpChatBackend final : public ChatBackend {
public:
    explicit HttpChatBackend(const RemoteEndpoint& endpoint);
    ~HttpChatBackend() override;

    std::string complete(const std::vector<ChatMessage>& messages,
                         const GenParams& params) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Fixed system preamble steering generation behavior; included in every
// assistant and self-chat prompt.
extern const std::string_view kSafetyPreamble;

// Personalized response generation: system preamble plus the rendered
// retrieval block, the last `history_window` history turns, then the query.
// Returns the backend's reply.
std::string generate_response(ChatBackend& backend, const std::string& query,
                              const RetrievedPrompt& prompt,
                              const std::vector<ChatMessage>& history, const GenParams& params,
                              std::size_t history_window = 6);

// The exact message list generate_response sends; exposed so tests can pin
// the assembly as a pure function.
std::vector<ChatMessage> assemble_messages(const std::string& query,
                                           const RetrievedPrompt& prompt,
                                           const std::vector<ChatMessage>& history,
                                           std::size_t history_window);

}  // namespace tiermem
