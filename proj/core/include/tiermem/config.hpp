#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tiermem/chat.hpp"
#include "tiermem/types.hpp"

namespace tiermem {

enum class BackendChoice {
    Mock,    // deterministic offline implementation (rule coordinator,
             // trigram embedder, mock chat)
    Remote,  // HTTP-backed implementation
};

std::string_view to_string(BackendChoice choice);
BackendChoice backend_choice_from_string(std::string_view s);

// Per-role backend selection for the four pluggable components.
struct BackendSelection {
    BackendChoice coordinator = BackendChoice::Mock;
    BackendChoice embedder = BackendChoice::Mock;
    BackendChoice generator = BackendChoice::Mock;
    BackendChoice judge = BackendChoice::Mock;
};

// Everything an operator can tune, loaded from a JSON config file. One seed
// drives all randomness. The API key itself is resolved from the named
// environment variable at runtime and never serialized anywhere.
struct EngineConfig {
    MemoryConfig memory;
    std::size_t retrieval_k = 3;
    std::size_t prompt_budget = 1024;
    std::size_t history_window = 6;
    std::uint64_t seed = 0;
    double selfchat_temperature = 0.7;
    double eval_temperature = 0.0;
    std::size_t max_output_tokens = 2048;
    BackendSelection backends;
    RemoteEndpoint remote;

    GenParams selfchat_params() const {
        return GenParams{selfchat_temperature, max_output_tokens, seed};
    }
    GenParams eval_params() const { return GenParams{eval_temperature, max_output_tokens, seed}; }
};

// Parse and validate; unknown fields rejected, numeric fields must be
// positive. Missing fields keep their defaults.
EngineConfig parse_engine_config(const std::string& json_text);
EngineConfig load_engine_config(const std::filesystem::path& path);

// Canonical form used for digesting: compact JSON, lexicographic keys,
// every field spelled out, no secrets.
std::string canonical_config_json(const EngineConfig& config);

// SHA-256 hex of the canonical form; embedded in reports for provenance.
std::string config_digest(const EngineConfig& config);

}  // namespace tiermem
