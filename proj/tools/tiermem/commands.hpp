#pragma once

#include <string>

#include "runtime.hpp"

namespace tiermem::cli {

struct GenerateArgs {
    std::string profiles_path;
    std::string topics_path;  // optional
    std::size_t n_rounds = 10;
    std::string out_path;
};
int cmd_generate_data(const Runtime& runtime, const GenerateArgs& args);

struct BuildArgs {
    std::string dialogues_path;
    std::string out_dir;
    std::size_t checkpoint_every = 0;  // 0 = no checkpoints
};
int cmd_build_memory(const Runtime& runtime, const BuildArgs& args);

struct QueryArgs {
    std::string snapshot_path;
    std::string query;
};
int cmd_query(const Runtime& runtime, const QueryArgs& args);

struct ChatArgs {
    std::string snapshot_path;
    std::string transcript_path;  // optional
};
int cmd_chat(const Runtime& runtime, const ChatArgs& args);

struct EvalArgs {
    std::string task;  // qa | preference | generation
    std::string input_path;
    std::string snapshot_path;  // required for qa/preference
    std::string out_path;
};
int cmd_eval(const Runtime& runtime, const EvalArgs& args);

struct InspectArgs {
    std::string snapshot_path;
};
int cmd_inspect(const Runtime& runtime, const InspectArgs& args);

}  // namespace tiermem::cli
