#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "tiermem/chat.hpp"
#include "tiermem/config.hpp"
#include "tiermem/coordinator.hpp"
#include "tiermem/embedder.hpp"

namespace tiermem::cli {

// Stable exit-code contract for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitPartialReplay = 4;
inline constexpr int kExitIntegrity = 5;

// Options shared by every subcommand.
struct GlobalOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> backend;  // forces every role to mock/remote
    bool verbose = false;
    bool no_retrieval = false;
};

// All wired-up components for one invocation. Owns the backends the
// coordinator/embedder/generator/judge roles resolve to.
class Runtime {
public:
    explicit Runtime(const GlobalOptions& options);

    const EngineConfig& config() const { return config_; }
    const GlobalOptions& options() const { return options_; }
    const Coordinator& coordinator() const { return *coordinator_; }
    const Embedder& embedder() const { return *embedder_; }
    ChatBackend& generator() const { return *generator_; }
    ChatBackend& judge() const { return *judge_; }
    std::string digest() const;

private:
    GlobalOptions options_;
    EngineConfig config_;
    std::unique_ptr<ChatBackend> coordinator_backend_;
    std::unique_ptr<Coordinator> coordinator_;
    std::unique_ptr<Embedder> embedder_;
    std::unique_ptr<ChatBackend> generator_;
    std::unique_ptr<ChatBackend> judge_;
};

// Map a library error to the exit-code contract and print it to stderr.
int report_error(const std::exception& error);

}  // namespace tiermem::cli
