#include <iomanip>
#include <iostream>

#include "commands.hpp"
#include "tiermem/chat.hpp"
#include "tiermem/retrieval.hpp"
#include "tiermem/snapshot.hpp"

namespace tiermem::cli {

namespace {

void print_trace(const RetrievedPrompt& prompt, std::ostream& os) {
    os << "retrieval trace:\n";
    os << "  STM hits (" << prompt.stm_hits.size() << "):\n";
    for (const auto& hit : prompt.stm_hits) {
        os << "    distance " << hit.distance << "  [" << to_string(hit.item.kind) << "] "
           << hit.item.text << "\n";
    }
    os << "  LTM hits (" << prompt.ltm_hits.size() << "):\n";
    for (const auto& hit : prompt.ltm_hits) {
        os << "    similarity " << std::fixed << std::setprecision(4) << hit.similarity << "  ["
           << to_string(hit.item.kind) << "] " << hit.item.text << "\n";
    }
    os.unsetf(std::ios::fixed);
}

}  // namespace

int cmd_query(const Runtime& runtime, const QueryArgs& args) {
    MemorySnapshot memory;
    try {
        memory = load_snapshot_file(args.snapshot_path);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    try {
        RetrievedPrompt prompt;
        if (!runtime.options().no_retrieval) {
            prompt = retrieve_prompt(memory, runtime.embedder(), args.query,
                                     runtime.config().retrieval_k, runtime.config().prompt_budget);
        }
        if (runtime.options().verbose) {
            print_trace(prompt, std::cout);
        }
        const auto response =
            generate_response(runtime.generator(), args.query, prompt, {},
                              runtime.config().eval_params(), runtime.config().history_window);
        std::cout << response << "\n";
    } catch (const std::exception& e) {
        return report_error(e);
    }
    return kExitOk;
}

}  // namespace tiermem::cli
