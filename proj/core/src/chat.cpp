#include "tiermem/chat.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <semaphore>
#include <thread>

#include "tiermem/error.hpp"
#include "tiermem/text.hpp"

#include <httplib.h>

namespace tiermem {

using nlohmann::json;

std::string_view to_string(ChatRole role) {
    switch (role) {
        case ChatRole::System: return "system";
        case ChatRole::User: return "user";
        case ChatRole::Assistant: return "assistant";
    }
    return "user";
}

std::string resolve_api_key(const RemoteEndpoint& endpoint) {
    if (endpoint.api_key_env.empty()) return {};
    const char* value = std::getenv(endpoint.api_key_env.c_str());
    return value == nullptr ? std::string{} : std::string(value);
}

const std::string_view kSafetyPreamble =
    "You are a careful medical assistant. Give safe, general information, "
    "never invent a diagnosis, never change prescriptions, and recommend a "
    "licensed clinician for urgent or treatment-specific decisions.";

// ---------------------------------------------------------------------------
// MockChatBackend

namespace {

std::size_t token_overlap(const std::string& a, const std::string& b) {
    auto ta = text::tokenize(a);
    auto tb = text::tokenize(b);
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    std::vector<std::string> common;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
    return common.size();
}

const ChatMessage* last_user_message(const std::vector<ChatMessage>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == ChatRole::User) return &*it;
    }
    return nullptr;
}

std::vector<std::string> knowledge_block_items(const std::vector<ChatMessage>& messages) {
    std::vector<std::string> items;
    for (const auto& message : messages) {
        bool in_block = false;
        std::size_t start = 0;
        const std::string& content = message.content;
        while (start <= content.size()) {
            const auto end = content.find('\n', start);
            const std::string_view line =
                std::string_view(content).substr(start, end == std::string::npos ? content.size() - start
                                                                                 : end - start);
            if (line == kUserSectionHeader || line == kCommonSectionHeader) {
                in_block = true;
            } else if (in_block && line.starts_with("- ")) {
                items.emplace_back(line.substr(2));
            } else if (!line.empty() && !line.starts_with("- ")) {
                in_block = false;
            }
            if (end == std::string::npos) break;
            start = end + 1;
        }
    }
    return items;
}

// Option lines following an "Options:" marker, formatted "- <label>".
std::vector<std::string> option_items(const std::string& content) {
    std::vector<std::string> options;
    const auto marker = content.find("Options:");
    if (marker == std::string::npos) return options;
    std::size_t start = marker;
    while (start < content.size()) {
        const auto end = content.find('\n', start);
        const std::string_view line = std::string_view(content).substr(
            start, end == std::string::npos ? content.size() - start : end - start);
        if (line.starts_with("- ")) options.emplace_back(line.substr(2));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return options;
}

std::string profile_block(const std::vector<ChatMessage>& messages, std::string_view marker) {
    for (const auto& message : messages) {
        if (message.role != ChatRole::System) continue;
        const auto pos = message.content.find(marker);
        if (pos == std::string::npos) continue;
        const auto start = pos + marker.size();
        const auto end = message.content.find('\n', start);
        return message.content.substr(start, end == std::string::npos ? std::string::npos
                                                                      : end - start);
    }
    return {};
}

bool system_contains(const std::vector<ChatMessage>& messages, std::string_view needle) {
    return std::any_of(messages.begin(), messages.end(), [&](const ChatMessage& m) {
        return m.role == ChatRole::System && m.content.find(needle) != std::string::npos;
    });
}

}  // namespace

std::string MockChatBackend::complete(const std::vector<ChatMessage>& messages,
                                      const GenParams& params) {
    if (messages.empty()) {
        raise(Errc::precondition_violation, "complete() requires at least one message");
    }
    const ChatMessage* last_user = last_user_message(messages);
    const std::string query = last_user != nullptr ? last_user->content : std::string{};

    // Preference classification: pick the option best supported by the rest
    // of the prompt (retrieved knowledge included). The options block itself
    // is excluded from the scored context, or every option would match its
    // own listing.
    if (last_user != nullptr && query.find("Options:") != std::string::npos) {
        const auto options = option_items(query);
        if (!options.empty()) {
            std::string context;
            for (const auto& message : messages) {
                if (&message == last_user) continue;
                context += message.content + "\n";
            }
            context += query.substr(0, query.find("Options:"));
            std::size_t best = 0;
            std::size_t best_score = 0;
            for (std::size_t i = 0; i < options.size(); ++i) {
                const auto score = token_overlap(options[i], context);
                if (score > best_score) {
                    best_score = score;
                    best = i;
                }
            }
            return options[best];
        }
    }

    // Pairwise judging: deterministic verdict by overlap with the question.
    if (query.find("VERDICT_A") != std::string::npos &&
        query.find("VERDICT_B") != std::string::npos) {
        const auto q_pos = query.find("Question:");
        const auto a_pos = query.find("Response A:");
        const auto b_pos = query.find("Response B:");
        if (q_pos != std::string::npos && a_pos != std::string::npos &&
            b_pos != std::string::npos && a_pos > q_pos && b_pos > a_pos) {
            const std::string question = query.substr(q_pos + 9, a_pos - q_pos - 9);
            const std::string res_a = query.substr(a_pos + 11, b_pos - a_pos - 11);
            const std::string res_b = query.substr(b_pos + 11);
            const auto sa = token_overlap(res_a, question);
            const auto sb = token_overlap(res_b, question);
            if (sa > sb) return "VERDICT_A";
            if (sb > sa) return "VERDICT_B";
            return "VERDICT_TIE";
        }
    }

    // Retrieval-augmented generation: echo the knowledge item that best
    // matches the query, verbatim.
    const auto knowledge = knowledge_block_items(messages);
    if (!knowledge.empty()) {
        std::size_t best = 0;
        std::size_t best_score = 0;
        for (std::size_t i = 0; i < knowledge.size(); ++i) {
            const auto score = token_overlap(knowledge[i], query);
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        return knowledge[best];
    }

    // Self-chat roles: cycle deterministically through profile sentences.
    const bool is_patient = system_contains(messages, "You are the patient");
    const bool is_doctor = system_contains(messages, "You are the doctor");
    if (is_patient || is_doctor) {
        const std::string profile = profile_block(messages, "Profile: ");
        const auto sentences = text::split_sentences(profile);
        if (!sentences.empty()) {
            // One profile sentence per round: both sessions grow by two
            // messages per round, so this cycles in lockstep with rounds.
            const std::size_t round = messages.size() >= 2 ? (messages.size() - 2) / 2 : 0;
            const std::size_t idx = (params.seed + round) % sentences.size();
            if (is_patient) {
                return sentences[idx] + " What do you advise?";
            }
            return "Thanks for sharing. " + sentences[idx] + " Please keep track of how you feel.";
        }
    }

    // Fallback template around the last user message.
    return "I have no personal records for that. As general guidance, please "
           "consult a clinician about: " +
           query;
}

// ---------------------------------------------------------------------------
// HttpChatBackend

struct HttpChatBackend::Impl {
    RemoteEndpoint endpoint;
    std::string api_key;
    std::counting_semaphore<64> inflight;

    explicit Impl(const RemoteEndpoint& ep)
        : endpoint(ep),
          api_key(resolve_api_key(ep)),
          inflight(std::max(1, std::min(ep.max_inflight, 64))) {}
};

HttpChatBackend::HttpChatBackend(const RemoteEndpoint& endpoint)
    : impl_(std::make_unique<Impl>(endpoint)) {
    if (endpoint.base_url.empty()) {
        raise(Errc::invalid_config, "remote backend requires a base_url");
    }
}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::complete(const std::vector<ChatMessage>& messages,
                                      const GenParams& params) {
    if (messages.empty()) {
        raise(Errc::precondition_violation, "complete() requires at least one message");
    }

    json body_messages = json::array();
    for (const auto& message : messages) {
        body_messages.push_back(
            json{{"role", to_string(message.role)}, {"content", message.content}});
    }
    const json body = {
        {"model", impl_->endpoint.model},
        {"messages", body_messages},
        {"temperature", params.temperature},
        {"max_tokens", params.max_tokens},
    };

    impl_->inflight.acquire();
    struct Release {
        std::counting_semaphore<64>& sem;
        ~Release() { sem.release(); }
    } release{impl_->inflight};

    httplib::Client client(impl_->endpoint.base_url);
    const int timeout_ms = impl_->endpoint.timeout_ms;
    client.set_connection_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(50 << attempt));
        }
        auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res) continue;
        if (res->status == 401 || res->status == 403) {
            raise(Errc::auth_error, "chat endpoint rejected credentials (status " +
                                        std::to_string(res->status) + ")");
        }
        if (res->status >= 500) continue;
        if (res->status != 200) {
            raise(Errc::backend_unavailable,
                  "chat endpoint returned status " + std::to_string(res->status));
        }
        try {
            const json j = json::parse(res->body);
            const auto& choice = j.at("choices").at(0);
            const auto finish = choice.value("finish_reason", "stop");
            if (finish != "stop") {
                raise(Errc::response_truncated, "finish reason was '" + finish + "'");
            }
            return choice.at("message").at("content").get<std::string>();
        } catch (const json::exception& e) {
            raise(Errc::backend_unavailable,
                  std::string("chat response was not the expected JSON: ") + e.what());
        }
    }
    raise(Errc::backend_unavailable, "chat endpoint unreachable after retries");
}

// ---------------------------------------------------------------------------
// Response generation

std::vector<ChatMessage> assemble_messages(const std::string& query,
                                           const RetrievedPrompt& prompt,
                                           const std::vector<ChatMessage>& history,
                                           std::size_t history_window) {
    std::vector<ChatMessage> messages;
    std::string system(kSafetyPreamble);
    if (!prompt.rendered.empty()) {
        system += "\n\nKnown about this user and relevant facts:\n" + prompt.rendered;
    }
    messages.push_back(ChatMessage{ChatRole::System, std::move(system)});

    const std::size_t take = std::min(history.size(), history_window);
    for (std::size_t i = history.size() - take; i < history.size(); ++i) {
        messages.push_back(history[i]);
    }
    messages.push_back(ChatMessage{ChatRole::User, query});
    return messages;
}

std::string generate_response(ChatBackend& backend, const std::string& query,
                              const RetrievedPrompt& prompt,
                              const std::vector<ChatMessage>& history, const GenParams& params,
                              std::size_t history_window) {
    return backend.complete(assemble_messages(query, prompt, history, history_window), params);
}

}  // namespace tiermem
