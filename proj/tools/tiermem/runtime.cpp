#include "runtime.hpp"

#include <iostream>

#include "tiermem/error.hpp"

namespace tiermem::cli {

namespace {

std::unique_ptr<ChatBackend> make_chat_backend(BackendChoice choice,
                                               const RemoteEndpoint& endpoint) {
    if (choice == BackendChoice::Remote) {
        return std::make_unique<HttpChatBackend>(endpoint);
    }
    return std::make_unique<MockChatBackend>();
}

}  // namespace

Runtime::Runtime(const GlobalOptions& options) : options_(options) {
    config_ = options.config_path ? load_engine_config(*options.config_path)
                                  : parse_engine_config("{}");
    if (options.seed) config_.seed = *options.seed;
    if (options.backend) {
        const auto choice = backend_choice_from_string(*options.backend);
        config_.backends.coordinator = choice;
        config_.backends.embedder = choice;
        config_.backends.generator = choice;
        config_.backends.judge = choice;
    }

    if (config_.backends.coordinator == BackendChoice::Remote) {
        coordinator_backend_ = std::make_unique<HttpChatBackend>(config_.remote);
        coordinator_ = std::make_unique<RemoteCoordinator>(*coordinator_backend_, config_.seed);
    } else {
        coordinator_ = std::make_unique<RuleCoordinator>();
    }

    if (config_.backends.embedder == BackendChoice::Remote) {
        embedder_ = std::make_unique<RemoteEmbedder>(config_.remote, config_.memory.embedding_dim);
    } else {
        embedder_ = std::make_unique<LocalEmbedder>(config_.memory.embedding_dim);
    }

    generator_ = make_chat_backend(config_.backends.generator, config_.remote);
    judge_ = make_chat_backend(config_.backends.judge, config_.remote);
}

std::string Runtime::digest() const {
    return config_digest(config_);
}

int report_error(const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    const auto* typed = dynamic_cast<const Error*>(&error);
    if (typed == nullptr) return kExitInput;
    switch (typed->code()) {
        case Errc::backend_unavailable:
        case Errc::auth_error:
        case Errc::response_truncated:
        case Errc::coordinator_unavailable:
            return kExitBackend;
        default:
            return kExitInput;
    }
}

}  // namespace tiermem::cli
