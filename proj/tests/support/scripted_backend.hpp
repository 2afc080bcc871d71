#pragma once

#include <string>
#include <vector>

#include "tiermem/chat.hpp"
#include "tiermem/error.hpp"

namespace tiermem::testing {

// Chat backend that replays a fixed list of replies and records every call.
// Running past the script raises BackendUnavailable, which doubles as the
// fault-injection hook for atomicity tests.
class ScriptedChatBackend final : public ChatBackend {
public:
    explicit ScriptedChatBackend(std::vector<std::string> replies)
        : replies_(std::move(replies)) {}

    std::string complete(const std::vector<ChatMessage>& messages,
                         const GenParams& params) override {
        (void)params;
        calls_.push_back(messages);
        if (next_ >= replies_.size()) {
            raise(Errc::backend_unavailable, "scripted backend exhausted");
        }
        return replies_[next_++];
    }

    const std::vector<std::vector<ChatMessage>>& calls() const { return calls_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
    std::vector<std::vector<ChatMessage>> calls_;
};

}  // namespace tiermem::testing
