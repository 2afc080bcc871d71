#include "tiermem/dialogue.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tiermem/error.hpp"

namespace tiermem {

using nlohmann::json;

std::string_view to_string(Role role) {
    return role == Role::Patient ? "patient" : "doctor";
}

Role role_from_string(std::string_view s) {
    if (s == "patient") return Role::Patient;
    if (s == "doctor") return Role::Doctor;
    raise(Errc::io_error, "unknown role: " + std::string(s));
}

std::string dialogue_to_jsonl_line(const std::string& user_id, const DialogueRound& round) {
    json turns = json::array();
    for (const auto& turn : round.turns) {
        turns.push_back(json{{"role", to_string(turn.role)}, {"text", turn.text}});
    }
    const json line = {
        {"round", round.round_index},
        {"turns", turns},
        {"user_id", user_id},
    };
    return line.dump();
}

std::vector<UserDialogue> parse_dialogue_jsonl(const std::string& bytes) {
    std::vector<UserDialogue> out;
    std::istringstream stream(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            raise(Errc::io_error,
                  "dialogue line " + std::to_string(line_no) + " is not valid JSON: " + e.what());
        }
        try {
            const auto user_id = j.at("user_id").get<std::string>();
            DialogueRound round;
            round.round_index = j.at("round").get<std::uint64_t>();
            for (const auto& t : j.at("turns")) {
                DialogueTurn turn;
                turn.role = role_from_string(t.at("role").get<std::string>());
                turn.text = t.at("text").get<std::string>();
                round.turns.push_back(std::move(turn));
            }
            auto it = std::find_if(out.begin(), out.end(), [&](const UserDialogue& u) {
                return u.user_id == user_id;
            });
            if (it == out.end()) {
                out.push_back(UserDialogue{user_id, {}});
                it = out.end() - 1;
            }
            it->rounds.push_back(std::move(round));
        } catch (const Error&) {
            throw;
        } catch (const json::exception& e) {
            raise(Errc::io_error,
                  "dialogue line " + std::to_string(line_no) + " has bad structure: " + e.what());
        }
    }
    return out;
}

std::vector<UserDialogue> load_dialogue_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::io_error, "cannot open for read: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_dialogue_jsonl(bytes);
}

void write_dialogue_jsonl(const std::vector<UserDialogue>& dialogues,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(Errc::io_error, "cannot open for write: " + path.string());
    }
    for (const auto& user : dialogues) {
        for (const auto& round : user.rounds) {
            out << dialogue_to_jsonl_line(user.user_id, round) << "\n";
        }
    }
    if (!out) {
        raise(Errc::io_error, "write failed: " + path.string());
    }
}

}  // namespace tiermem
