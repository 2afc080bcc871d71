#include <CLI11.hpp>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "runtime.hpp"

using namespace tiermem::cli;

int main(int argc, char** argv) {
    CLI::App app{"tiermem - tiered personalization memory engine"};
    app.require_subcommand(1);
    // Global flags may appear after the subcommand name.
    app.fallthrough();

    GlobalOptions global;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string backend;
    app.add_option("--config", config_path, "Engine config JSON file")->envname("TIERMEM_CONFIG");
    const auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--backend", backend, "Force every role to one backend: mock|remote");
    app.add_flag("--verbose", global.verbose, "Verbose output / retrieval traces");
    app.add_flag("--no-retrieval", global.no_retrieval,
                 "Skip memory retrieval (baseline behavior)");

    GenerateArgs generate_args;
    auto* generate = app.add_subcommand("generate-data",
                                        "Simulate profiled dialogues via self-chat");
    generate->add_option("--profiles", generate_args.profiles_path, "Profiles JSON file")
        ->required();
    generate->add_option("--topics", generate_args.topics_path,
                         "Topic plan JSON file (array of strings)");
    generate->add_option("--rounds", generate_args.n_rounds, "Rounds per user")
        ->check(CLI::PositiveNumber);
    generate->add_option("--out", generate_args.out_path, "Output dialogue JSONL")->required();

    BuildArgs build_args;
    auto* build = app.add_subcommand("build-memory", "Replay dialogues into memory snapshots");
    build->add_option("--dialogues", build_args.dialogues_path, "Dialogue JSONL file")
        ->required();
    build->add_option("--out-dir", build_args.out_dir, "Directory for snapshots and logs")
        ->required();
    build->add_option("--checkpoint-every", build_args.checkpoint_every,
                      "Write a checkpoint snapshot every N rounds (0 = off)");

    QueryArgs query_args;
    auto* query = app.add_subcommand("query", "Answer one query with memory-augmented context");
    query->add_option("--snapshot", query_args.snapshot_path, "Memory snapshot file")
        ->required();
    query->add_option("--query", query_args.query, "The query text")->required();

    ChatArgs chat_args;
    auto* chat = app.add_subcommand("chat", "Interactive session over a snapshot (read-only)");
    chat->add_option("--snapshot", chat_args.snapshot_path, "Memory snapshot file")->required();
    chat->add_option("--transcript", chat_args.transcript_path,
                     "Append the session transcript to this file");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Run an evaluation task and write a metric report");
    eval->add_option("--task", eval_args.task, "Task: qa|preference|generation")->required();
    eval->add_option("--input", eval_args.input_path, "Task JSONL file")->required();
    eval->add_option("--snapshot", eval_args.snapshot_path,
                     "Memory snapshot (qa and preference tasks)");
    eval->add_option("--out", eval_args.out_path, "Report JSON output path")->required();

    InspectArgs inspect_args;
    auto* inspect = app.add_subcommand("inspect", "Print snapshot statistics and check "
                                                  "integrity");
    inspect->add_option("--snapshot", inspect_args.snapshot_path, "Memory snapshot file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (!config_path.empty()) global.config_path = config_path;
    if (seed_opt->count() > 0) global.seed = seed;
    if (!backend.empty()) global.backend = backend;

    std::unique_ptr<Runtime> runtime;
    try {
        runtime = std::make_unique<Runtime>(global);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    if (generate->parsed()) return cmd_generate_data(*runtime, generate_args);
    if (build->parsed()) return cmd_build_memory(*runtime, build_args);
    if (query->parsed()) return cmd_query(*runtime, query_args);
    if (chat->parsed()) return cmd_chat(*runtime, chat_args);
    if (eval->parsed()) return cmd_eval(*runtime, eval_args);
    if (inspect->parsed()) return cmd_inspect(*runtime, inspect_args);
    return kExitInput;
}
