#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "tiermem/chat.hpp"
#include "tiermem/retrieval.hpp"
#include "tiermem/snapshot.hpp"

namespace tiermem::cli {

namespace {

void print_trace(const RetrievedPrompt& prompt) {
    std::cout << "[trace] STM hits: " << prompt.stm_hits.size() << "\n";
    for (const auto& hit : prompt.stm_hits) {
        std::cout << "[trace]   d=" << hit.distance << " " << hit.item.text << "\n";
    }
    std::cout << "[trace] LTM hits: " << prompt.ltm_hits.size() << "\n";
    for (const auto& hit : prompt.ltm_hits) {
        std::cout << "[trace]   s=" << hit.similarity << " " << hit.item.text << "\n";
    }
}

}  // namespace

// Read-eval loop over the snapshot. The memory is read-only for the whole
// session; queries never learn.
int cmd_chat(const Runtime& runtime, const ChatArgs& args) {
    MemorySnapshot memory;
    try {
        memory = load_snapshot_file(args.snapshot_path);
    } catch (const std::exception& e) {
        return report_error(e);
    }

    std::ofstream transcript;
    if (!args.transcript_path.empty()) {
        transcript.open(args.transcript_path, std::ios::binary | std::ios::app);
        if (!transcript) {
            std::cerr << "error: cannot open transcript file " << args.transcript_path << "\n";
            return kExitInput;
        }
    }

    bool trace = runtime.options().verbose;
    std::vector<ChatMessage> history;
    std::cout << "tiermem chat for user '" << memory.user_id
              << "' (/quit to exit, /trace to toggle retrieval trace)\n";

    std::string line;
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) {
            std::cout << "\n";
            break;
        }
        if (line == "/quit") break;
        if (line == "/trace") {
            trace = !trace;
            std::cout << "trace " << (trace ? "on" : "off") << "\n";
            continue;
        }
        if (line.empty()) continue;

        try {
            RetrievedPrompt prompt;
            if (!runtime.options().no_retrieval) {
                prompt = retrieve_prompt(memory, runtime.embedder(), line,
                                         runtime.config().retrieval_k,
                                         runtime.config().prompt_budget);
            }
            if (trace) print_trace(prompt);
            const auto response =
                generate_response(runtime.generator(), line, prompt, history,
                                  runtime.config().eval_params(),
                                  runtime.config().history_window);
            std::cout << response << "\n";
            history.push_back({ChatRole::User, line});
            history.push_back({ChatRole::Assistant, response});
            if (transcript) {
                transcript << "user: " << line << "\n" << "assistant: " << response << "\n";
                transcript.flush();
            }
        } catch (const std::exception& e) {
            // Backend hiccups should not kill the session.
            std::cerr << "error: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace tiermem::cli
