#include <fstream>
#include <iostream>
#include <json.hpp>

#include "commands.hpp"
#include "tiermem/dialogue.hpp"
#include "tiermem/engine.hpp"
#include "tiermem/error.hpp"
#include "tiermem/snapshot.hpp"

namespace tiermem::cli {

using nlohmann::json;

namespace {

json report_to_json(const IterationReport& report) {
    json promoted = json::array();
    for (const auto& fk : report.items_promoted) {
        promoted.push_back(json{{"key", fk.key}, {"kind", to_string(fk.kind)}});
    }
    return json{
        {"items_promoted", promoted},
        {"items_summarized", report.items_summarized},
        {"notes_taken", report.notes_taken},
        {"round_index", report.round_index},
        {"stm_refreshed", report.stm_refreshed},
    };
}

}  // namespace

int cmd_build_memory(const Runtime& runtime, const BuildArgs& args) {
    std::vector<UserDialogue> dialogues;
    try {
        dialogues = load_dialogue_jsonl(args.dialogues_path);
        std::filesystem::create_directories(args.out_dir);
    } catch (const std::exception& e) {
        return report_error(e);
    }
    if (dialogues.empty()) {
        std::cout << "no dialogue rounds found; nothing to build\n";
        return kExitOk;
    }

    const std::filesystem::path out_dir(args.out_dir);
    for (const auto& user : dialogues) {
        const auto initial = make_snapshot(user.user_id, runtime.config().memory);

        // Validate up front so bad input is an input error, not a partial
        // replay.
        for (std::size_t i = 0; i < user.rounds.size(); ++i) {
            if (user.rounds[i].round_index != i) {
                std::cerr << "error: rounds for user " << user.user_id
                          << " are not consecutive from 0\n";
                return kExitInput;
            }
        }

        std::ofstream log(out_dir / ("replay_" + user.user_id + ".jsonl"),
                          std::ios::binary | std::ios::trunc);
        log << json{{"config_digest", runtime.digest()}, {"user_id", user.user_id}}.dump()
            << "\n";

        ReplayResult result;
        try {
            result = replay(initial, runtime.coordinator(), runtime.embedder(), user.rounds,
                            [&](const MemorySnapshot& memory, const IterationReport& report) {
                                log << report_to_json(report).dump() << "\n";
                                if (args.checkpoint_every > 0 &&
                                    memory.round_cursor % args.checkpoint_every == 0) {
                                    save_snapshot_file(
                                        memory, out_dir / ("snapshot_" + user.user_id + ".round_" +
                                                           std::to_string(memory.round_cursor) +
                                                           ".json"));
                                }
                            });
        } catch (const std::exception& e) {
            return report_error(e);
        }

        if (!result.ok()) {
            const auto partial = out_dir / ("snapshot_" + user.user_id + ".partial_round_" +
                                            std::to_string(result.memory.round_cursor) + ".json");
            save_snapshot_file(result.memory, partial);
            std::cerr << "error: replay for user " << user.user_id << " failed at round "
                      << *result.failed_round << ": " << result.error << "\n"
                      << "partial snapshot: " << partial.string() << "\n";
            return kExitPartialReplay;
        }

        const auto out_path = out_dir / ("snapshot_" + user.user_id + ".json");
        save_snapshot_file(result.memory, out_path);
        if (runtime.options().verbose) {
            std::cout << user.user_id << ": " << result.reports.size() << " rounds, "
                      << result.memory.ltm.entries.size() << " LTM entries -> "
                      << out_path.string() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace tiermem::cli
