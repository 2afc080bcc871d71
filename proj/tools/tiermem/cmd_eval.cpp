#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "tiermem/chat.hpp"
#include "tiermem/error.hpp"
#include "tiermem/metrics.hpp"
#include "tiermem/retrieval.hpp"
#include "tiermem/snapshot.hpp"

namespace tiermem::cli {

using nlohmann::json;

namespace {

std::vector<json> load_task_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open task file: " + path);
    }
    std::vector<json> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            items.push_back(json::parse(line));
        } catch (const json::exception& e) {
            raise(Errc::io_error,
                  "task line " + std::to_string(line_no) + " is not valid JSON: " + e.what());
        }
    }
    if (items.empty()) {
        raise(Errc::invalid_config, "task file has no items: " + path);
    }
    return items;
}

json record(const std::string& task, const std::string& metric, double value, std::size_t n,
            const std::string& digest) {
    return json{
        {"config_digest", digest}, {"metric", metric}, {"n", n}, {"task", task}, {"value", value},
    };
}

RetrievedPrompt maybe_retrieve(const Runtime& runtime, const MemorySnapshot& memory,
                               const std::string& query) {
    if (runtime.options().no_retrieval) return {};
    return retrieve_prompt(memory, runtime.embedder(), query, runtime.config().retrieval_k,
                           runtime.config().prompt_budget);
}

json run_qa(const Runtime& runtime, const MemorySnapshot& memory,
            const std::vector<json>& items) {
    double sum_r1 = 0.0;
    double sum_rl = 0.0;
    for (const auto& item : items) {
        const auto question = item.at("question").get<std::string>();
        const auto reference = item.at("reference").get<std::string>();
        const auto prompt = maybe_retrieve(runtime, memory, question);
        const auto answer =
            generate_response(runtime.generator(), question, prompt, {},
                              runtime.config().eval_params(), runtime.config().history_window);
        sum_r1 += rouge1(answer, reference).f1;
        sum_rl += rougeL(answer, reference).f1;
        if (runtime.options().verbose) {
            std::cout << "qa: " << question << " -> " << answer << "\n";
        }
    }
    const auto n = items.size();
    const auto digest = runtime.digest();
    return json::array({
        record("qa", "rouge1_f1", sum_r1 / static_cast<double>(n), n, digest),
        record("qa", "rougeL_f1", sum_rl / static_cast<double>(n), n, digest),
    });
}

json run_preference(const Runtime& runtime, const MemorySnapshot& memory,
                    const std::vector<json>& items) {
    std::vector<std::string> predictions;
    std::vector<std::string> gold;
    for (const auto& item : items) {
        const auto query = item.at("query").get<std::string>();
        const auto gold_label = item.at("gold_label").get<std::string>();
        const auto label_set = item.at("label_set").get<std::vector<std::string>>();

        std::ostringstream user;
        user << query << "\nSelect the user's dialogue preference.\nOptions:\n";
        for (const auto& label : label_set) user << "- " << label << "\n";
        user << "Reply with exactly one option.";

        const auto prompt = maybe_retrieve(runtime, memory, query);
        const auto reply =
            generate_response(runtime.generator(), user.str(), prompt, {},
                              runtime.config().eval_params(), runtime.config().history_window);

        // First label mentioned in the reply wins; no mention counts wrong.
        std::string predicted;
        for (const auto& label : label_set) {
            if (reply.find(label) != std::string::npos) {
                predicted = label;
                break;
            }
        }
        predictions.push_back(predicted);
        gold.push_back(gold_label);
    }
    return json::array({record("preference", "accuracy",
                               preference_accuracy(predictions, gold), items.size(),
                               runtime.digest())});
}

json run_generation(const Runtime& runtime, const std::vector<json>& items) {
    std::vector<GenerationPair> pairs;
    for (const auto& item : items) {
        GenerationPair pair;
        pair.query = item.at("query").get<std::string>();
        pair.candidate = item.at("response_a").get<std::string>();
        pair.baseline = item.at("response_b").get<std::string>();
        pairs.push_back(std::move(pair));
    }
    const auto outcome = judge_pairs(runtime.judge(), pairs, runtime.config().seed);
    if (outcome.verdicts.empty()) {
        raise(Errc::backend_unavailable, "judge completed no comparisons: " + outcome.error);
    }
    auto rec = record("generation", "win_rate", win_rate(outcome.verdicts), outcome.completed,
                      runtime.digest());
    if (outcome.aborted) {
        rec["partial"] = true;
        rec["error"] = outcome.error;
    }
    return json::array({rec});
}

}  // namespace

int cmd_eval(const Runtime& runtime, const EvalArgs& args) {
    json report;
    try {
        const auto items = load_task_lines(args.input_path);
        if (args.task == "qa" || args.task == "preference") {
            const auto memory = load_snapshot_file(args.snapshot_path);
            report = args.task == "qa" ? run_qa(runtime, memory, items)
                                       : run_preference(runtime, memory, items);
            if (runtime.options().no_retrieval) {
                for (auto& rec : report) rec["retrieval_disabled"] = true;
            }
        } else if (args.task == "generation") {
            report = run_generation(runtime, items);
        } else {
            std::cerr << "error: unknown task '" << args.task
                      << "' (expected qa|preference|generation)\n";
            return kExitInput;
        }
    } catch (const std::exception& e) {
        return report_error(e);
    }

    try {
        std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(Errc::io_error, "cannot open report file: " + args.out_path);
        }
        out << report.dump(2) << "\n";
    } catch (const std::exception& e) {
        return report_error(e);
    }

    for (const auto& rec : report) {
        std::cout << rec.at("task").get<std::string>() << " "
                  << rec.at("metric").get<std::string>() << " = " << rec.at("value").get<double>()
                  << " (n=" << rec.at("n").get<std::size_t>() << ")\n";
    }
    return kExitOk;
}

}  // namespace tiermem::cli
