#include "tiermem/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <json.hpp>

#include "tiermem/error.hpp"
#include "tiermem/sha256.hpp"

namespace tiermem {

using nlohmann::json;

std::string_view to_string(BackendChoice choice) {
    return choice == BackendChoice::Mock ? "mock" : "remote";
}

BackendChoice backend_choice_from_string(std::string_view s) {
    if (s == "mock" || s == "rule" || s == "local") return BackendChoice::Mock;
    if (s == "remote") return BackendChoice::Remote;
    raise(Errc::invalid_config, "unknown backend choice: " + std::string(s));
}

namespace {

void require_positive(std::uint64_t value, const char* name) {
    if (value == 0) {
        raise(Errc::invalid_config, std::string(name) + " must be positive");
    }
}

const std::array<std::string_view, 13> kKnownTopLevel = {
    "theta",          "refresh_period", "working_capacity",    "stm_capacity",
    "embedding_dim",  "retrieval_k",    "prompt_budget",       "history_window",
    "seed",           "backends",       "remote",              "selfchat_temperature",
    "eval_temperature",
};

}  // namespace

EngineConfig parse_engine_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::invalid_config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        raise(Errc::invalid_config, "config must be a JSON object");
    }

    EngineConfig config;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "max_output_tokens") continue;  // accepted below
            if (std::find(kKnownTopLevel.begin(), kKnownTopLevel.end(), key) ==
                kKnownTopLevel.end()) {
                raise(Errc::invalid_config, "unknown config field: " + key);
            }
            (void)value;
        }
        config.memory.theta = doc.value("theta", config.memory.theta);
        config.memory.refresh_period = doc.value("refresh_period", config.memory.refresh_period);
        config.memory.working_capacity =
            doc.value("working_capacity", config.memory.working_capacity);
        config.memory.stm_capacity = doc.value("stm_capacity", config.memory.stm_capacity);
        config.memory.embedding_dim = doc.value("embedding_dim", config.memory.embedding_dim);
        config.retrieval_k = doc.value("retrieval_k", config.retrieval_k);
        config.prompt_budget = doc.value("prompt_budget", config.prompt_budget);
        config.history_window = doc.value("history_window", config.history_window);
        config.seed = doc.value("seed", config.seed);
        config.selfchat_temperature =
            doc.value("selfchat_temperature", config.selfchat_temperature);
        config.eval_temperature = doc.value("eval_temperature", config.eval_temperature);
        config.max_output_tokens = doc.value("max_output_tokens", config.max_output_tokens);

        if (doc.contains("backends")) {
            const auto& b = doc.at("backends");
            config.backends.coordinator =
                backend_choice_from_string(b.value("coordinator", "mock"));
            config.backends.embedder = backend_choice_from_string(b.value("embedder", "mock"));
            config.backends.generator = backend_choice_from_string(b.value("generator", "mock"));
            config.backends.judge = backend_choice_from_string(b.value("judge", "mock"));
        }
        if (doc.contains("remote")) {
            const auto& r = doc.at("remote");
            config.remote.base_url = r.value("base_url", config.remote.base_url);
            config.remote.model = r.value("model", config.remote.model);
            config.remote.api_key_env = r.value("api_key_env", config.remote.api_key_env);
            config.remote.timeout_ms = r.value("timeout_ms", config.remote.timeout_ms);
            config.remote.max_inflight = r.value("max_inflight", config.remote.max_inflight);
        }
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        raise(Errc::invalid_config, std::string("bad config structure: ") + e.what());
    }

    require_positive(config.memory.theta, "theta");
    require_positive(config.memory.refresh_period, "refresh_period");
    require_positive(config.memory.working_capacity, "working_capacity");
    require_positive(config.memory.stm_capacity, "stm_capacity");
    require_positive(config.memory.embedding_dim, "embedding_dim");
    require_positive(config.retrieval_k, "retrieval_k");
    require_positive(config.prompt_budget, "prompt_budget");
    require_positive(config.history_window, "history_window");
    require_positive(config.max_output_tokens, "max_output_tokens");
    if (config.remote.timeout_ms <= 0 || config.remote.max_inflight <= 0) {
        raise(Errc::invalid_config, "remote timeout_ms and max_inflight must be positive");
    }
    return config;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open config: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_engine_config(bytes);
}

std::string canonical_config_json(const EngineConfig& config) {
    const json doc = {
        {"backends",
         {
             {"coordinator", to_string(config.backends.coordinator)},
             {"embedder", to_string(config.backends.embedder)},
             {"generator", to_string(config.backends.generator)},
             {"judge", to_string(config.backends.judge)},
         }},
        {"embedding_dim", config.memory.embedding_dim},
        {"eval_temperature", config.eval_temperature},
        {"history_window", config.history_window},
        {"max_output_tokens", config.max_output_tokens},
        {"prompt_budget", config.prompt_budget},
        {"refresh_period", config.memory.refresh_period},
        {"remote",
         {
             {"base_url", config.remote.base_url},
             {"max_inflight", config.remote.max_inflight},
             {"model", config.remote.model},
             {"timeout_ms", config.remote.timeout_ms},
         }},
        {"retrieval_k", config.retrieval_k},
        {"seed", config.seed},
        {"selfchat_temperature", config.selfchat_temperature},
        {"stm_capacity", config.memory.stm_capacity},
        {"theta", config.memory.theta},
        {"working_capacity", config.memory.working_capacity},
    };
    return doc.dump();
}

std::string config_digest(const EngineConfig& config) {
    return sha256_hex(canonical_config_json(config));
}

}  // namespace tiermem
