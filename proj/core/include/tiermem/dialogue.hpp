#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tiermem {

enum class Role {
    Patient,
    Doctor,
};

std::string_view to_string(Role role);
Role role_from_string(std::string_view s);

struct DialogueTurn {
    Role role = Role::Patient;
    std::string text;

    bool operator==(const DialogueTurn&) const = default;
};

// One round d_i of a multi-round dialogue: an ordered list of turns.
struct DialogueRound {
    std::uint64_t round_index = 0;
    std::vector<DialogueTurn> turns;

    bool operator==(const DialogueRound&) const = default;
};

struct UserDialogue {
    std::string user_id;
    std::vector<DialogueRound> rounds;
};

// Wire format: newline-delimited JSON, one object per round:
//   {"round": N, "turns": [{"role": "patient"|"doctor", "text": "..."}], "user_id": "..."}
std::string dialogue_to_jsonl_line(const std::string& user_id, const DialogueRound& round);

// Parse a whole JSONL document. Rounds are grouped by user_id in order of
// first appearance; round order within a user follows file order.
std::vector<UserDialogue> parse_dialogue_jsonl(const std::string& bytes);

std::vector<UserDialogue> load_dialogue_jsonl(const std::filesystem::path& path);

void write_dialogue_jsonl(const std::vector<UserDialogue>& dialogues,
                          const std::filesystem::path& path);

}  // namespace tiermem
